#include "lobscale/kernels.hpp"

namespace lobscale::kernels {

namespace {

inline void mul_hilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    lo = static_cast<std::uint32_t>(p);
    hi = static_cast<std::uint32_t>(p >> 32);
}

inline void philox_round(std::uint32_t c[4], std::uint32_t k0, std::uint32_t k1) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mul_hilo(kPhiloxM0, c[0], hi0, lo0);
    mul_hilo(kPhiloxM1, c[2], hi1, lo1);
    std::uint32_t n0 = hi1 ^ c[1] ^ k0;
    std::uint32_t n1 = lo1;
    std::uint32_t n2 = hi0 ^ c[3] ^ k1;
    std::uint32_t n3 = lo0;
    c[0] = n0;
    c[1] = n1;
    c[2] = n2;
    c[3] = n3;
}

void philox_fill_scalar(std::uint64_t key, std::uint64_t stream, std::uint64_t ctr_start,
                        std::size_t nblocks, std::uint32_t* out) {
    const std::uint32_t key0 = static_cast<std::uint32_t>(key);
    const std::uint32_t key1 = static_cast<std::uint32_t>(key >> 32);
    const std::uint32_t s0 = static_cast<std::uint32_t>(stream);
    const std::uint32_t s1 = static_cast<std::uint32_t>(stream >> 32);
    for (std::size_t b = 0; b < nblocks; ++b) {
        std::uint64_t ctr = ctr_start + b;
        std::uint32_t c[4] = {static_cast<std::uint32_t>(ctr),
                              static_cast<std::uint32_t>(ctr >> 32), s0, s1};
        std::uint32_t k0 = key0, k1 = key1;
        for (int r = 0; r < 10; ++r) {
            philox_round(c, k0, k1);
            k0 += kPhiloxW0;
            k1 += kPhiloxW1;
        }
        out[4 * b + 0] = c[0];
        out[4 * b + 1] = c[1];
        out[4 * b + 2] = c[2];
        out[4 * b + 3] = c[3];
    }
}

void unit_from_u64_scalar(const std::uint64_t* in, std::size_t n, double* out) {
    constexpr double k2m53 = 1.0 / 9007199254740992.0;  // 2^-53
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(in[i] >> 11) * k2m53;
}

double sum_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

void mean_var_scalar(const double* x, std::size_t n, double* mean, double* var) {
    if (n == 0) {
        *mean = 0.0;
        *var = 0.0;
        return;
    }
    double m = sum_scalar(x, n) / static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = x[i] - m;
        acc += d * d;
    }
    *mean = m;
    *var = acc / static_cast<double>(n);
}

double sum_sq_diff_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        double d = x[i] - x[i - 1];
        acc += d * d;
    }
    return acc;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{philox_fill_scalar, unit_from_u64_scalar, sum_scalar,
                         mean_var_scalar,    sum_sq_diff_scalar,   "scalar"};
    return ops;
}

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const Ops& active_ops() {
    static const Ops& chosen = avx2_supported() ? avx2_ops() : scalar_ops();
    return chosen;
}

}  // namespace lobscale::kernels
