#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lobscale/lattice.hpp"

namespace lobscale {

/// Placement distribution of incoming limit orders over relative ticks.
/// mass[j] is the probability of relative tick lo + j. The tail mass
/// tail_mass(i) = P(X >= i) is precomputed by backward summation so deep-tail
/// survival values keep full relative precision.
class PlacementPmf {
public:
    PlacementPmf() = default;
    PlacementPmf(std::int64_t lo, std::vector<double> mass);

    std::int64_t lo() const { return lo_; }
    std::int64_t hi() const { return lo_ + static_cast<std::int64_t>(mass_.size()) - 1; }
    std::size_t size() const { return mass_.size(); }

    double at(std::int64_t i) const {
        std::int64_t j = i - lo_;
        return (j >= 0 && j < static_cast<std::int64_t>(mass_.size()))
                   ? mass_[static_cast<std::size_t>(j)]
                   : 0.0;
    }
    /// P(X >= i); equals 1 for i <= lo and 0 for i > hi.
    double tail_mass(std::int64_t i) const {
        std::int64_t j = i - lo_;
        if (j <= 0) return 1.0;
        if (j >= static_cast<std::int64_t>(tail_.size())) return 0.0;
        return tail_[static_cast<std::size_t>(j)];
    }
    /// F(i) = P(X <= i).
    double cdf(std::int64_t i) const { return 1.0 - tail_mass(i + 1); }

    const std::vector<double>& masses() const { return mass_; }

private:
    std::int64_t lo_ = 0;
    std::vector<double> mass_;
    std::vector<double> tail_;  // tail_[j] = sum of mass_[j..]
};

/// Uniform placement on [lo, hi].
PlacementPmf uniform_pmf(std::int64_t lo, std::int64_t hi);

/// Placement whose tail mass is proportional to i^-v on [1, hi]:
/// tail_mass(i) = i^-v for i in [1, hi], truncated (remaining mass at hi).
PlacementPmf power_survival_pmf(double v, std::int64_t hi);

/// Mass proportional to (c2 + i*delta)^-u on [lo, hi] (the heavy-tailed book
/// shape used by the simulation studies). Requires c2 + lo*delta > 0.
PlacementPmf power_mass_pmf(double u, double c2, double delta, std::int64_t lo, std::int64_t hi);

/// Spread-indexed placement family; simulators query it with the frozen
/// spread. Families built here depend on the quote only through the spread.
using PlacementFamily = std::function<PlacementPmf(std::int64_t spread_ticks)>;

/// Family constant in the spread: support on relative ticks [0, width), mass
/// proportional to (1 + i)^-u. Legal for every positive spread.
PlacementFamily at_or_behind_quote_family(double u, std::int64_t width);

/// Spread-adaptive family: support [min_relative_tick(s), hi], mass
/// proportional to (c2 + i*delta)^-u.
PlacementFamily inside_spread_family(double u, double c2, double delta, std::int64_t hi);

}  // namespace lobscale
