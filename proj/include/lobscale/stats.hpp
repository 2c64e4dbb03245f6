#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "lobscale/common.hpp"
#include "lobscale/rng.hpp"

namespace lobscale {

/// Path-average moments of a series sampled on a fixed grid, after dropping
/// an initial burn-in fraction.
struct StationaryStats {
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t n_points = 0;
    double burn_in_frac = 0.0;
};

StationaryStats stationary_stats(std::span<const double> sampled, double burn_in_frac = 0.2);

/// Per-trade-scale volatility estimate from levels sampled at dt:
/// sqrt( mean((m_k - m_{k-1})^2) / dt ). Needs at least 1000 increments.
double sigma1(std::span<const double> m_sampled, double dt = 0.1);

/// Windowed volatility: per non-overlapping window of 100 consecutive level
/// points, the sample standard deviation (divisor 99). Needs >= 10 windows.
std::vector<double> vol_series(std::span<const double> m_sampled);

double lag1_autocorr(std::span<const double> x);

/// Permutation test for volatility clustering: compares the observed lag-1
/// autocorrelation of the windowed volatility series against its null
/// distribution under random shuffles.
struct ClusteringTest {
    double observed = 0.0;
    double null_q95 = 0.0;
    double p_value = 1.0;
    bool rejects = false;
};
ClusteringTest clustering_permutation_test(std::span<const double> sigma_bar, int n_shuffles,
                                           RngStream& rng);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// One-sample KS statistic of data against the Exponential(1/mean) fit, plus
/// the asymptotic p-value (Kolmogorov distribution).
struct ExponentialFit {
    double rate = 0.0;
    double ks = 0.0;
    double p_value = 0.0;
};
ExponentialFit ks_exponential_fit(std::span<const double> data);

double kolmogorov_survival(double x);  // Q(x) = P(sup |B| > x), asymptotic KS law

/// Total variation distance between two discrete pmfs keyed by tick.
double total_variation(const std::map<std::int64_t, double>& p,
                       const std::map<std::int64_t, double>& q);

/// Empirical pmf of a sample of integers.
std::map<std::int64_t, double> empirical_pmf(std::span<const std::int64_t> values);

}  // namespace lobscale
