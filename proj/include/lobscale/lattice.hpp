#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>

#include "lobscale/common.hpp"

namespace lobscale {

/// Price lattice {i * delta : i integer}. Prices live internally as signed
/// tick indices; reals appear only at I/O boundaries.
struct TickGrid {
    double delta = 1.0;

    bool valid() const { return std::isfinite(delta) && delta > 0.0; }
    double price(std::int64_t ticks) const { return static_cast<double>(ticks) * delta; }
};

/// floor(x / delta) with a snap tolerance: inputs within a few ulp below a
/// lattice point are treated as on it, so lattice values survive round trips
/// through real arithmetic. Floor is toward -infinity.
inline std::int64_t floor_ticks(double x, double delta) {
    assert(delta > 0.0);
    double q = x / delta;
    double f = std::floor(q);
    if ((f + 1.0) - q <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(q)))
        f += 1.0;
    return static_cast<std::int64_t>(f);
}

inline double lattice_floor(double x, const TickGrid& grid) {
    return grid.price(floor_ticks(x, grid.delta));
}

enum class Side : std::uint8_t { ask, bid };

/// Best quotes in ticks. spread = ask - bid >= 0.
struct Quote {
    std::int64_t ask_ticks = 0;
    std::int64_t bid_ticks = 0;

    std::int64_t spread_ticks() const { return ask_ticks - bid_ticks; }
    std::int64_t mid_twice_ticks() const { return ask_ticks + bid_ticks; }
    bool valid() const { return ask_ticks >= bid_ticks; }
};

/// Relative price i on a side maps to an absolute tick: ask + i or bid - i.
/// Negative i lies inside the spread.
inline std::int64_t relative_to_absolute_ticks(std::int64_t i, Side side, const Quote& q) {
    return side == Side::ask ? q.ask_ticks + i : q.bid_ticks - i;
}

inline double relative_to_absolute(std::int64_t i, Side side, const Quote& q,
                                   const TickGrid& grid) {
    return grid.price(relative_to_absolute_ticks(i, side, q));
}

/// Smallest relative tick an incoming order may take: placement mass vanishes
/// at and below -spread/2, so the support is { i : 2*i > -spread_ticks }.
inline std::int64_t min_relative_tick(std::int64_t spread_ticks) {
    // floor(-s/2) + 1 == smallest integer strictly above -s/2
    std::int64_t s = spread_ticks;
    std::int64_t fl = (s >= 0) ? -((s + 1) / 2) : (-s) / 2;  // floor(-s/2)
    return fl + 1;
}

}  // namespace lobscale
