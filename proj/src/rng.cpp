#include "lobscale/rng.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <vector>

#include "lobscale/common.hpp"
#include "lobscale/kernels.hpp"

namespace lobscale {

namespace {
constexpr double k2m53 = 1.0 / 9007199254740992.0;

inline std::uint64_t join_u64(std::uint32_t lo, std::uint32_t hi) {
    return static_cast<std::uint64_t>(lo) | (static_cast<std::uint64_t>(hi) << 32);
}
}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_(stream_id) {}

void RngStream::refill() {
    kernels::active_ops().philox_fill(seed_, stream_, ctr_, 1, block_.data());
    ++ctr_;
    pos_ = 0;
}

std::uint64_t RngStream::next_u64() {
    if (pos_ >= 2) refill();
    std::uint64_t v = (pos_ == 0) ? join_u64(block_[0], block_[1]) : join_u64(block_[2], block_[3]);
    ++pos_;
    return v;
}

double RngStream::uniform() { return static_cast<double>(next_u64() >> 11) * k2m53; }

double RngStream::uniform_pos() { return 1.0 - uniform(); }

double RngStream::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u1 = uniform_pos();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(a);
    has_cached_normal_ = true;
    return r * std::cos(a);
}

double RngStream::exponential(double rate) {
    assert(rate > 0.0);
    return -std::log(uniform_pos()) / rate;
}

bool RngStream::bernoulli(double p) { return uniform() < p; }

long RngStream::poisson(double mean) {
    if (!(mean >= 0.0)) throw config_error("poisson: mean must be >= 0");
    if (mean == 0.0) return 0;
    if (mean < 30.0) {
        // Knuth product method.
        const double limit = std::exp(-mean);
        long k = 0;
        double prod = uniform_pos();
        while (prod > limit) {
            ++k;
            prod *= uniform_pos();
        }
        return k;
    }
    // Hormann's PTRS transformed rejection, exact for large means.
    const double slam = std::sqrt(mean);
    const double llam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        double u = uniform() - 0.5;
        double v = uniform_pos();
        double us = 0.5 - std::fabs(u);
        double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<long>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            kf * llam - mean - std::lgamma(kf + 1.0))
            return static_cast<long>(kf);
    }
}

void RngStream::fill_uniform(std::span<double> out) {
    std::size_t i = 0;
    // Drain any buffered half-block first so the draw order matches uniform().
    while (i < out.size() && pos_ < 2) out[i++] = uniform();
    const std::size_t remaining = out.size() - i;
    if (remaining == 0) return;

    const std::size_t nblocks = remaining / 2;
    if (nblocks > 0) {
        std::vector<std::uint32_t> words(4 * nblocks);
        kernels::active_ops().philox_fill(seed_, stream_, ctr_, nblocks, words.data());
        ctr_ += nblocks;
        std::vector<std::uint64_t> u64s(2 * nblocks);
        for (std::size_t b = 0; b < nblocks; ++b) {
            u64s[2 * b] = join_u64(words[4 * b + 0], words[4 * b + 1]);
            u64s[2 * b + 1] = join_u64(words[4 * b + 2], words[4 * b + 3]);
        }
        kernels::active_ops().unit_from_u64(u64s.data(), u64s.size(), out.data() + i);
        i += 2 * nblocks;
    }
    while (i < out.size()) out[i++] = uniform();  // odd tail
}

void RngStream::fill_normal(std::span<double> out) {
    std::size_t i = 0;
    if (has_cached_normal_ && i < out.size()) {
        has_cached_normal_ = false;
        out[i++] = cached_normal_;
    }
    const std::size_t n = out.size() - i;
    const std::size_t npairs = n / 2;
    if (npairs > 0) {
        std::vector<double> u(2 * npairs);
        fill_uniform(u);
        for (std::size_t p = 0; p < npairs; ++p) {
            double u1 = 1.0 - u[2 * p];
            double u2 = u[2 * p + 1];
            double r = std::sqrt(-2.0 * std::log(u1));
            double ang = 2.0 * std::numbers::pi * u2;
            out[i + 2 * p] = r * std::cos(ang);
            out[i + 2 * p + 1] = r * std::sin(ang);
        }
        i += 2 * npairs;
    }
    while (i < out.size()) out[i++] = normal();
}

}  // namespace lobscale
