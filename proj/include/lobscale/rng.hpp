#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace lobscale {

// Counter-based random stream (Philox4x32-10). A stream is fully determined
// by (seed, stream_id): replaying either gives a bit-identical draw sequence,
// and distinct stream_ids under the same seed are statistically independent,
// so replications can run on any thread layout without changing results.
//
// One 128-bit counter block yields two u64 draws; all distributions below
// consume whole u64s in a fixed order, so scalar and batched fills produce
// the same sequence.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64();
    double uniform();      // [0, 1), 53-bit resolution
    double uniform_pos();  // (0, 1]
    double normal();       // standard normal (Box-Muller, pair-cached)
    double exponential(double rate);
    bool bernoulli(double p);
    long poisson(double mean);

    // Batch fills; equivalent to calling uniform()/normal() in a loop but the
    // keystream generation goes through the dispatched kernels.
    void fill_uniform(std::span<double> out);
    void fill_normal(std::span<double> out);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t ctr_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int pos_ = 2;  // u64 slots consumed in block_ (2 = empty)
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace lobscale
