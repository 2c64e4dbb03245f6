#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lobscale/placement.hpp"

namespace lobscale {

/// Per-order cancellation intensity over the placement support, together with
/// the flow parameters it was derived from.
struct CancellationCurve {
    std::int64_t lo = 0;
    std::vector<double> rate;  // rate[j] = alpha(lo + j), events per unit time
    double lambda = 0.0;       // limit-order arrival rate per side
    double c_p = 1.0;          // patience ratio

    double at(std::int64_t i) const {
        std::int64_t j = i - lo;
        if (j < 0 || j >= static_cast<std::int64_t>(rate.size())) return 0.0;
        return rate[static_cast<std::size_t>(j)];
    }
    /// Clamped lookup for ticks outside the curve (stale orders in the
    /// simulator keep the nearest supported class).
    double at_clamped(std::int64_t i) const {
        if (rate.empty()) return 0.0;
        std::int64_t j = i - lo;
        if (j < 0) j = 0;
        if (j >= static_cast<std::int64_t>(rate.size()))
            j = static_cast<std::int64_t>(rate.size()) - 1;
        return rate[static_cast<std::size_t>(j)];
    }
    std::int64_t hi() const { return lo + static_cast<std::int64_t>(rate.size()) - 1; }
};

/// Survival function of the per-trade price increment: theta(i) is the
/// stationary probability that every queue at relative ticks below i is
/// empty. Equals 1 at and below the support's lowest tick, is nonincreasing,
/// and reaches 0 past the top of a finite support.
struct ThetaCurve {
    std::int64_t lo = 0;          // first tick at which the curve is stored
    std::vector<double> value;    // value[j] = theta(lo + j); value[0] == 1

    double at(std::int64_t i) const {
        std::int64_t j = i - lo;
        if (j <= 0) return 1.0;
        if (j >= static_cast<std::int64_t>(value.size())) return value.back();
        return value[static_cast<std::size_t>(j)];
    }
    std::int64_t hi() const { return lo + static_cast<std::int64_t>(value.size()) - 1; }
};

/// Cancellation intensity induced by the placement pmf and patience ratio:
/// alpha(i) = (lambda/c_p) * p(i) / [log S(i) - log S(i+1)] with S(i) the
/// placement tail mass from tick i. Where p(i) = 0 the analytic limit
/// (lambda/c_p) * S(i) applies.
CancellationCurve cancellation_from_placement(const PlacementPmf& p, double lambda, double c_p);

/// Stationary infinite-server composition: theta(i) =
/// exp(-sum_{j < i} lambda p(j) / alpha(j)). An alpha of zero with p > 0 is
/// legal only at the terminal support tick (theta collapses to 0 beyond it);
/// anywhere else it is reported as degenerate.
ThetaCurve theta_from_queue_params(const PlacementPmf& p, const CancellationCurve& alpha,
                                   double lambda);

/// Closed form under the patience-ratio cancellation: theta(i) = S(i)^c_p.
ThetaCurve theta_closed_form(const PlacementPmf& p, double c_p);

/// Alternative regime with constant per-order cancellation rate alpha and
/// placement tail survival F_bar:
/// theta(i) = ( sum_{l>=0} prod_{k=1..l} lambda F_bar(i) / (mu + k alpha) )^-1.
/// The series is truncated when a term drops below 1e-15 of the running sum.
ThetaCurve theta_other_regime(const std::function<double(std::int64_t)>& survival_F_bar,
                              double lambda, double mu, double alpha, std::int64_t lo,
                              std::int64_t hi);

/// Asymptotic form of the alternative regime for lambda/mu -> c_prime,
/// alpha/lambda -> 0.
inline double theta_other_regime_asymptotic(double F_bar, double c_prime) {
    return F_bar / c_prime;
}

/// Power-law exponent mapping: a placement tail with index v yields a
/// price-return tail with index c_p * v.
inline double tail_exponent_map(double v, double c_p) { return c_p * v; }

/// Least-squares fit of c_p from log theta(i) = c_p * log S(i) over interior
/// ticks where both sides are in (0, 1).
double calibrate_patience_ratio(const PlacementPmf& p, const ThetaCurve& target);

}  // namespace lobscale
