// AVX2 variants of the kernel table. This TU is compiled with -mavx2; callers
// must gate on avx2_supported() before dispatching here.

#include "lobscale/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace lobscale::kernels {

namespace {

// 8-lane 32x32 -> (hi, lo) multiply, even/odd lane split and recombine.
inline __m256i mul32_hilo(__m256i a, std::uint32_t b, __m256i& hi) {
    const __m256i bv = _mm256_set1_epi32(static_cast<int>(b));
    __m256i even = _mm256_mul_epu32(a, bv);
    __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), bv);
    __m256i lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0b10101010);
    hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0b10101010);
    return lo;
}

void philox_fill_avx2(std::uint64_t key, std::uint64_t stream, std::uint64_t ctr_start,
                      std::size_t nblocks, std::uint32_t* out) {
    const std::uint32_t s0 = static_cast<std::uint32_t>(stream);
    const std::uint32_t s1 = static_cast<std::uint32_t>(stream >> 32);
    const std::size_t nvec = nblocks / 8;

    for (std::size_t v = 0; v < nvec; ++v) {
        alignas(32) std::uint32_t c0a[8], c1a[8];
        for (int j = 0; j < 8; ++j) {
            std::uint64_t ctr = ctr_start + 8 * v + static_cast<std::uint64_t>(j);
            c0a[j] = static_cast<std::uint32_t>(ctr);
            c1a[j] = static_cast<std::uint32_t>(ctr >> 32);
        }
        __m256i c0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(c0a));
        __m256i c1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(c1a));
        __m256i c2 = _mm256_set1_epi32(static_cast<int>(s0));
        __m256i c3 = _mm256_set1_epi32(static_cast<int>(s1));
        std::uint32_t k0 = static_cast<std::uint32_t>(key);
        std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);

        for (int r = 0; r < 10; ++r) {
            __m256i hi0, hi1;
            __m256i lo0 = mul32_hilo(c0, kPhiloxM0, hi0);
            __m256i lo1 = mul32_hilo(c2, kPhiloxM1, hi1);
            __m256i k0v = _mm256_set1_epi32(static_cast<int>(k0));
            __m256i k1v = _mm256_set1_epi32(static_cast<int>(k1));
            c0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), k0v);
            c1 = lo1;
            c2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), k1v);
            c3 = lo0;
            k0 += kPhiloxW0;
            k1 += kPhiloxW1;
        }

        // SoA -> AoS: 8 blocks of 4 words each.
        __m256i t0 = _mm256_unpacklo_epi32(c0, c1);
        __m256i t1 = _mm256_unpackhi_epi32(c0, c1);
        __m256i t2 = _mm256_unpacklo_epi32(c2, c3);
        __m256i t3 = _mm256_unpackhi_epi32(c2, c3);
        __m256i u0 = _mm256_unpacklo_epi64(t0, t2);  // blocks 0, 4
        __m256i u1 = _mm256_unpackhi_epi64(t0, t2);  // blocks 1, 5
        __m256i u2 = _mm256_unpacklo_epi64(t1, t3);  // blocks 2, 6
        __m256i u3 = _mm256_unpackhi_epi64(t1, t3);  // blocks 3, 7

        std::uint32_t* dst = out + 32 * v;
        __m256i* o = reinterpret_cast<__m256i*>(dst);
        _mm256_storeu_si256(o + 0, _mm256_permute2x128_si256(u0, u1, 0x20));
        _mm256_storeu_si256(o + 1, _mm256_permute2x128_si256(u2, u3, 0x20));
        _mm256_storeu_si256(o + 2, _mm256_permute2x128_si256(u0, u1, 0x31));
        _mm256_storeu_si256(o + 3, _mm256_permute2x128_si256(u2, u3, 0x31));
    }

    const std::size_t done = nvec * 8;
    if (done < nblocks)
        scalar_ops().philox_fill(key, stream, ctr_start + done, nblocks - done, out + 4 * done);
}

// u64 -> double without AVX-512. The 53-bit value u >> 11 is split into a
// 21-bit high part and a 32-bit low part; each part converts exactly via the
// 2^52 magic constant and the recombination hi*2^32 + lo is exact below 2^53,
// so the result is bit-identical to the scalar cast.
void unit_from_u64_avx2(const std::uint64_t* in, std::size_t n, double* out) {
    constexpr double k2m53 = 1.0 / 9007199254740992.0;
    const __m256d scale = _mm256_set1_pd(k2m53);
    const __m256d magic = _mm256_set1_pd(4503599627370496.0);  // 2^52
    const __m256i magic_i = _mm256_castpd_si256(magic);
    const __m256d two32 = _mm256_set1_pd(4294967296.0);
    const __m256i lomask = _mm256_set1_epi64x(0xFFFFFFFFll);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + i));
        v = _mm256_srli_epi64(v, 11);
        __m256i lo = _mm256_and_si256(v, lomask);
        __m256i hi = _mm256_srli_epi64(v, 32);
        __m256d dlo = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(lo, magic_i)), magic);
        __m256d dhi = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(hi, magic_i)), magic);
        __m256d d = _mm256_add_pd(_mm256_mul_pd(dhi, two32), dlo);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(d, scale));
    }
    if (i < n) scalar_ops().unit_from_u64(in + i, n - i, out + i);
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
        a1 = _mm256_add_pd(a1, _mm256_loadu_pd(x + i + 4));
    }
    double acc = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) acc += x[i];
    return acc;
}

void mean_var_avx2(const double* x, std::size_t n, double* mean, double* var) {
    if (n == 0) {
        *mean = 0.0;
        *var = 0.0;
        return;
    }
    double m = sum_avx2(x, n) / static_cast<double>(n);
    const __m256d mv = _mm256_set1_pd(m);
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(x + i), mv);
        __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(x + i + 4), mv);
        a0 = _mm256_fmadd_pd(d0, d0, a0);
        a1 = _mm256_fmadd_pd(d1, d1, a1);
    }
    double acc = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) {
        double d = x[i] - m;
        acc += d * d;
    }
    *mean = m;
    *var = acc / static_cast<double>(n);
}

double sum_sq_diff_avx2(const double* x, std::size_t n) {
    if (n < 2) return 0.0;
    __m256d a0 = _mm256_setzero_pd();
    std::size_t i = 1;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(x + i - 1));
        a0 = _mm256_fmadd_pd(d, d, a0);
    }
    double acc = hsum(a0);
    for (; i < n; ++i) {
        double d = x[i] - x[i - 1];
        acc += d * d;
    }
    return acc;
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops{philox_fill_avx2, unit_from_u64_avx2, sum_avx2,
                         mean_var_avx2,    sum_sq_diff_avx2,   "avx2"};
    return ops;
}

}  // namespace lobscale::kernels

#else  // non-x86: avx2_ops must exist but is never selected.

namespace lobscale::kernels {
const Ops& avx2_ops() { return scalar_ops(); }
}  // namespace lobscale::kernels

#endif
