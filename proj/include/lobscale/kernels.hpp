#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops used by the RNG and the path estimators.
//
// Every kernel has a scalar reference implementation and (on x86-64) an AVX2
// variant compiled into a separate translation unit. The active table is
// selected once at runtime from CPU capabilities; the scalar table stays
// reachable so equivalence tests can compare the two side by side.
//
// Contract notes:
//  * philox_fill is bit-exact across implementations (integer cipher).
//  * unit_from_u64 is bit-exact (one multiply per lane, no reassociation).
//  * sum / mean_var / sum_sq_diff may reassociate; implementations agree to
//    ~1e-12 relative on well-scaled data, which the tests pin down.

namespace lobscale::kernels {

// Philox4x32 round constants (Salmon et al., SC'11).
inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

struct Ops {
    // Writes nblocks * 4 words of Philox4x32-10 keystream to out.
    // Block b is the cipher of counter (ctr_start + b, stream) under key.
    void (*philox_fill)(std::uint64_t key, std::uint64_t stream, std::uint64_t ctr_start,
                        std::size_t nblocks, std::uint32_t* out);
    // out[i] = (in[i] >> 11) * 2^-53, the canonical [0,1) double from a u64.
    void (*unit_from_u64)(const std::uint64_t* in, std::size_t n, double* out);
    double (*sum)(const double* x, std::size_t n);
    // Two-pass mean and (population) variance.
    void (*mean_var)(const double* x, std::size_t n, double* mean, double* var);
    // sum over i in [1, n) of (x[i] - x[i-1])^2.
    double (*sum_sq_diff)(const double* x, std::size_t n);
    const char* name;
};

const Ops& scalar_ops();
bool avx2_supported();
const Ops& avx2_ops();    // only valid to call through if avx2_supported()
const Ops& active_ops();  // scalar or avx2, resolved once per process

}  // namespace lobscale::kernels
