#include <doctest.h>

#include <cmath>
#include <vector>

#include "lobscale/rng.hpp"

using namespace lobscale;

TEST_CASE("streams are reproducible and distinct") {
    RngStream a(123, 0), b(123, 0), c(123, 1), d(124, 0);
    bool all_equal_c = true, all_equal_d = true;
    for (int i = 0; i < 100; ++i) {
        std::uint64_t va = a.next_u64();
        CHECK(va == b.next_u64());
        if (va != c.next_u64()) all_equal_c = false;
        if (va != d.next_u64()) all_equal_d = false;
    }
    CHECK_FALSE(all_equal_c);
    CHECK_FALSE(all_equal_d);
}

TEST_CASE("uniform moments") {
    RngStream rng(99, 5);
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        s += u;
        s2 += u * u;
    }
    double mean = s / n;
    double var = s2 / n - mean * mean;
    // 3 standard errors
    CHECK(std::fabs(mean - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::fabs(var - 1.0 / 12.0) < 3.0 * 1.0 / 12.0 * std::sqrt(2.0 / n) * 3.0);
}

TEST_CASE("normal moments") {
    RngStream rng(1, 2);
    const int n = 200000;
    double s = 0, s2 = 0, s4 = 0;
    for (int i = 0; i < n; ++i) {
        double z = rng.normal();
        s += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    CHECK(std::fabs(s / n) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(s4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("fill_uniform and fill_normal match scalar draw-by-draw") {
    RngStream a(77, 3), b(77, 3);
    std::vector<double> batch(1537);
    a.fill_uniform(batch);
    for (double v : batch) CHECK(v == b.uniform());

    RngStream c(78, 4), d(78, 4);
    // offset the stream so the pair cache starts half-used
    CHECK(c.normal() == d.normal());
    std::vector<double> nbatch(999);
    c.fill_normal(nbatch);
    for (double v : nbatch) REQUIRE(v == d.normal());
}

TEST_CASE("poisson mean and variance, both samplers") {
    RngStream rng(5, 0);
    for (double mean : {0.3, 4.0, 25.0, 60.0, 20000.0}) {
        const int n = mean > 1000 ? 2000 : 20000;
        double s = 0, s2 = 0;
        for (int i = 0; i < n; ++i) {
            double k = static_cast<double>(rng.poisson(mean));
            s += k;
            s2 += k * k;
        }
        double m = s / n;
        double var = s2 / n - m * m;
        double se_mean = std::sqrt(mean / n);
        CHECK(std::fabs(m - mean) < 4.0 * se_mean);
        CHECK(var == doctest::Approx(mean).epsilon(0.15));
    }
}

TEST_CASE("bernoulli and exponential sanity") {
    RngStream rng(6, 1);
    int hits = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) hits += rng.bernoulli(0.3) ? 1 : 0;
    CHECK(std::fabs(hits / static_cast<double>(n) - 0.3) < 3.0 * std::sqrt(0.21 / n));

    double s = 0;
    for (int i = 0; i < n; ++i) s += rng.exponential(2.0);
    CHECK(s / n == doctest::Approx(0.5).epsilon(0.02));
}
