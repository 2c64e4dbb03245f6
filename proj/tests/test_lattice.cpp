#include <doctest.h>

#include <cmath>

#include "lobscale/lattice.hpp"
#include "lobscale/rng.hpp"

using namespace lobscale;

TEST_CASE("lattice_floor basics") {
    TickGrid g{0.1};
    CHECK(lattice_floor(0.37, g) == doctest::Approx(0.3));
    CHECK(lattice_floor(-0.05, g) == doctest::Approx(-0.1));
    CHECK(lattice_floor(-0.3, TickGrid{0.2}) == doctest::Approx(-0.4));

    // scaled bracket [U/(sqrt(n) delta)] delta with U = 0.02, n = 10^4,
    // delta = 10^-4: the bracket argument is 0.02 / (100 * 1e-4) = 2, so the
    // result is 2 ticks = 2e-4.
    double u = 0.02;
    double sqrt_n = std::sqrt(10000.0);
    TickGrid fine{1e-4};
    CHECK(floor_ticks(u / sqrt_n, fine.delta) == 2);
    CHECK(lattice_floor(u / sqrt_n, fine) == doctest::Approx(2e-4));
}

TEST_CASE("lattice_floor is idempotent on lattice points and monotone") {
    TickGrid g{0.25};
    RngStream rng(11, 0);
    for (int k = 0; k < 2000; ++k) {
        std::int64_t i = static_cast<std::int64_t>(std::floor((rng.uniform() - 0.5) * 2000.0));
        double x = g.price(i);
        CHECK(floor_ticks(x, g.delta) == i);  // idempotent through real arithmetic

        double a = (rng.uniform() - 0.5) * 100.0;
        double b = a + rng.uniform() * 10.0;
        CHECK(floor_ticks(a, g.delta) <= floor_ticks(b, g.delta));
    }
}

TEST_CASE("relative_to_absolute") {
    TickGrid g{0.01};
    Quote q{1000, 998};  // ask 10.00, bid 9.98
    CHECK(relative_to_absolute(2, Side::ask, q, g) == doctest::Approx(10.02));
    CHECK(relative_to_absolute(2, Side::bid, q, g) == doctest::Approx(9.96));

    Quote q2{1000, 990};
    CHECK(relative_to_absolute(-1, Side::ask, q2, g) == doctest::Approx(9.99));
    CHECK(relative_to_absolute_ticks(-1, Side::ask, q2) > q2.bid_ticks);  // inside the spread

    // ask side strictly increasing, bid side strictly decreasing in i
    for (std::int64_t i = -3; i < 10; ++i) {
        CHECK(relative_to_absolute_ticks(i + 1, Side::ask, q) >
              relative_to_absolute_ticks(i, Side::ask, q));
        CHECK(relative_to_absolute_ticks(i + 1, Side::bid, q) <
              relative_to_absolute_ticks(i, Side::bid, q));
    }
}

TEST_CASE("min_relative_tick excludes the far half of the spread") {
    CHECK(min_relative_tick(0) == 1);
    CHECK(min_relative_tick(1) == 0);
    CHECK(min_relative_tick(2) == 0);
    CHECK(min_relative_tick(3) == -1);
    CHECK(min_relative_tick(4) == -1);
    CHECK(min_relative_tick(5) == -2);
    // 2*i > -s exactly characterizes the support
    for (std::int64_t s = 0; s <= 50; ++s) {
        std::int64_t lo = min_relative_tick(s);
        CHECK(2 * lo > -s);
        CHECK(2 * (lo - 1) <= -s);
    }
}
