#pragma once

#include <span>

namespace lobscale {

/// Power-law tail fit. `exponent` is the primary estimate: the Hill estimate
/// for sample input, the log-log survival slope for curve input. The
/// curvature of the quadratic log-log fit flags tails that are not power-like
/// (an exponential tail bends the survival curve sharply downward).
struct TailFit {
    double exponent = 0.0;
    double scale = 0.0;
    double k_frac = 0.0;
    double hill = 0.0;           // NaN for curve input
    double loglog_slope = 0.0;   // exponent implied by the linear log-log fit
    double curvature = 0.0;      // quadratic coefficient of the log-log fit
    bool power_law_plausible = false;
};

/// Hill estimate on the top k_frac order statistics of positive samples, plus
/// the log-log least-squares slope of the empirical survival curve over the
/// same region. Requires at least 100 points in the fitted tail.
TailFit fit_tail(std::span<const double> samples, double k_frac);

/// Curve variant: x[i] > 0 strictly increasing with survival values in
/// (0, 1]; fits the top k_frac of grid points with positive survival.
TailFit fit_tail_survival(std::span<const double> x, std::span<const double> survival,
                          double k_frac);

}  // namespace lobscale
