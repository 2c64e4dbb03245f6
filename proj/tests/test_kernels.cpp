#include <doctest.h>

#include <cmath>
#include <vector>

#include "lobscale/kernels.hpp"
#include "lobscale/rng.hpp"

using namespace lobscale;

TEST_CASE("philox keystream: scalar vs avx2 bit-exact") {
    if (!kernels::avx2_supported()) {
        MESSAGE("avx2 not available; skipping");
        return;
    }
    for (std::size_t nblocks : {1u, 7u, 8u, 9u, 64u, 1000u}) {
        std::vector<std::uint32_t> a(4 * nblocks), b(4 * nblocks);
        kernels::scalar_ops().philox_fill(0x853c49e6748fea9bull, 42, 0xfffffffffffffff0ull,
                                          nblocks, a.data());
        kernels::avx2_ops().philox_fill(0x853c49e6748fea9bull, 42, 0xfffffffffffffff0ull, nblocks,
                                        b.data());
        REQUIRE(a == b);
    }
}

TEST_CASE("philox keystream: distinct streams differ, same stream repeats") {
    std::vector<std::uint32_t> a(64), b(64), c(64);
    kernels::scalar_ops().philox_fill(1, 0, 0, 16, a.data());
    kernels::scalar_ops().philox_fill(1, 0, 0, 16, b.data());
    kernels::scalar_ops().philox_fill(1, 1, 0, 16, c.data());
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("unit_from_u64: range and bit-exact equivalence") {
    RngStream rng(7, 7);
    std::vector<std::uint64_t> in(1001);
    for (auto& v : in) v = rng.next_u64();
    in[0] = 0;
    in[1] = ~0ull;  // largest -> largest double below 1
    std::vector<double> a(in.size()), b(in.size());
    kernels::scalar_ops().unit_from_u64(in.data(), in.size(), a.data());
    for (double v : a) {
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
    CHECK(a[0] == 0.0);
    if (kernels::avx2_supported()) {
        kernels::avx2_ops().unit_from_u64(in.data(), in.size(), b.data());
        REQUIRE(a == b);
    }
}

TEST_CASE("reductions agree with long-double oracle and across variants") {
    RngStream rng(3, 1);
    std::vector<double> x(10007);
    for (auto& v : x) v = rng.normal() * 3.0 + 1.0;

    long double s_ref = 0.0L;
    for (double v : x) s_ref += v;
    long double mean_ref = s_ref / static_cast<long double>(x.size());
    long double var_ref = 0.0L, ssd_ref = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        long double d = x[i] - mean_ref;
        var_ref += d * d;
        if (i > 0) {
            long double e = x[i] - x[i - 1];
            ssd_ref += e * e;
        }
    }
    var_ref /= static_cast<long double>(x.size());

    for (const auto* ops : {&kernels::scalar_ops(),
                            kernels::avx2_supported() ? &kernels::avx2_ops() : &kernels::scalar_ops()}) {
        double s = ops->sum(x.data(), x.size());
        CHECK(std::fabs(s - static_cast<double>(s_ref)) <=
              1e-12 * std::fabs(static_cast<double>(s_ref)) + 1e-12);
        double mean = 0, var = 0;
        ops->mean_var(x.data(), x.size(), &mean, &var);
        CHECK(mean == doctest::Approx(static_cast<double>(mean_ref)).epsilon(1e-12));
        CHECK(var == doctest::Approx(static_cast<double>(var_ref)).epsilon(1e-10));
        double ssd = ops->sum_sq_diff(x.data(), x.size());
        CHECK(ssd == doctest::Approx(static_cast<double>(ssd_ref)).epsilon(1e-10));
    }

    // odd/tiny sizes exercise the vector tails
    for (std::size_t n : {0u, 1u, 2u, 3u, 5u, 9u}) {
        double m1 = 0, v1 = 0, m2 = 0, v2 = 0;
        kernels::scalar_ops().mean_var(x.data(), n, &m1, &v1);
        kernels::active_ops().mean_var(x.data(), n, &m2, &v2);
        CHECK(m1 == doctest::Approx(m2).epsilon(1e-12));
        CHECK(v1 == doctest::Approx(v2).epsilon(1e-10));
    }
}
