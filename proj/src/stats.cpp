#include "lobscale/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lobscale/kernels.hpp"

namespace lobscale {

StationaryStats stationary_stats(std::span<const double> sampled, double burn_in_frac) {
    if (!(burn_in_frac >= 0.0 && burn_in_frac < 1.0))
        throw config_error("stationary_stats: burn_in_frac must be in [0, 1)");
    const std::size_t skip = static_cast<std::size_t>(burn_in_frac * static_cast<double>(sampled.size()));
    const std::size_t n = sampled.size() - skip;
    if (n < 100) throw insufficient_data_error("stationary_stats: fewer than 100 points after burn-in");
    double mean = 0.0, var = 0.0;
    kernels::active_ops().mean_var(sampled.data() + skip, n, &mean, &var);
    StationaryStats out;
    out.mean = mean;
    out.stddev = std::sqrt(var);
    out.n_points = n;
    out.burn_in_frac = burn_in_frac;
    return out;
}

double sigma1(std::span<const double> m_sampled, double dt) {
    if (!(dt > 0.0)) throw config_error("sigma1: dt must be > 0");
    if (m_sampled.size() < 1001)
        throw insufficient_data_error("sigma1: need at least 1000 increments");
    const double ssq = kernels::active_ops().sum_sq_diff(m_sampled.data(), m_sampled.size());
    const double n_inc = static_cast<double>(m_sampled.size() - 1);
    return std::sqrt(ssq / n_inc / dt);
}

std::vector<double> vol_series(std::span<const double> m_sampled) {
    constexpr std::size_t kWindow = 100;
    const std::size_t n_windows = m_sampled.size() / kWindow;
    if (n_windows < 10) throw insufficient_data_error("vol_series: need at least 10 windows");
    std::vector<double> out(n_windows);
    for (std::size_t w = 0; w < n_windows; ++w) {
        double mean = 0.0, var = 0.0;
        kernels::active_ops().mean_var(m_sampled.data() + w * kWindow, kWindow, &mean, &var);
        // population -> sample variance, divisor 99
        out[w] = std::sqrt(var * static_cast<double>(kWindow) / static_cast<double>(kWindow - 1));
    }
    return out;
}

double lag1_autocorr(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 3) throw insufficient_data_error("lag1_autocorr: need at least 3 points");
    double mean = 0.0, var = 0.0;
    kernels::active_ops().mean_var(x.data(), n, &mean, &var);
    if (var <= 0.0) throw degeneracy_error("lag1_autocorr: constant series");
    double acc = 0.0;
    for (std::size_t i = 1; i < n; ++i) acc += (x[i] - mean) * (x[i - 1] - mean);
    return acc / (static_cast<double>(n) * var);
}

ClusteringTest clustering_permutation_test(std::span<const double> sigma_bar, int n_shuffles,
                                           RngStream& rng) {
    if (n_shuffles < 20) throw config_error("clustering test: need at least 20 shuffles");
    ClusteringTest out;
    out.observed = lag1_autocorr(sigma_bar);

    std::vector<double> work(sigma_bar.begin(), sigma_bar.end());
    std::vector<double> null_stats(static_cast<std::size_t>(n_shuffles));
    for (int k = 0; k < n_shuffles; ++k) {
        // Fisher-Yates with the stream's uniforms
        for (std::size_t i = work.size() - 1; i > 0; --i) {
            std::size_t j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i + 1));
            if (j > i) j = i;
            std::swap(work[i], work[j]);
        }
        null_stats[static_cast<std::size_t>(k)] = lag1_autocorr(work);
    }
    std::sort(null_stats.begin(), null_stats.end());
    const std::size_t q95 = static_cast<std::size_t>(0.95 * static_cast<double>(n_shuffles));
    out.null_q95 = null_stats[std::min(q95, null_stats.size() - 1)];
    std::size_t ge = 0;
    for (double v : null_stats)
        if (v >= out.observed) ++ge;
    out.p_value = (static_cast<double>(ge) + 1.0) / (static_cast<double>(n_shuffles) + 1.0);
    out.rejects = out.observed > out.null_q95;
    return out;
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw insufficient_data_error("ks_statistic: empty input");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
    while (i < sa.size() && j < sb.size()) {
        double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= x) ++i;
        while (j < sb.size() && sb[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double kolmogorov_survival(double x) {
    if (x <= 0.0) return 1.0;
    // Q(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2)
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * static_cast<double>(k) * static_cast<double>(k) * x * x);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

ExponentialFit ks_exponential_fit(std::span<const double> data) {
    if (data.size() < 100) throw insufficient_data_error("ks_exponential_fit: need >= 100 points");
    std::vector<double> x(data.begin(), data.end());
    std::sort(x.begin(), x.end());
    double mean = kernels::active_ops().sum(x.data(), x.size()) / static_cast<double>(x.size());
    if (!(mean > 0.0)) throw degeneracy_error("ks_exponential_fit: nonpositive mean");
    ExponentialFit out;
    out.rate = 1.0 / mean;
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double f = 1.0 - std::exp(-out.rate * x[i]);
        double lo = static_cast<double>(i) / n;
        double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, std::fabs(f - lo), std::fabs(f - hi)});
    }
    out.ks = d;
    out.p_value = kolmogorov_survival(std::sqrt(n) * d);
    return out;
}

double total_variation(const std::map<std::int64_t, double>& p,
                       const std::map<std::int64_t, double>& q) {
    if (p.empty() || q.empty()) throw insufficient_data_error("total_variation: empty pmf");
    double acc = 0.0;
    auto it_p = p.begin();
    auto it_q = q.begin();
    while (it_p != p.end() || it_q != q.end()) {
        if (it_q == q.end() || (it_p != p.end() && it_p->first < it_q->first)) {
            acc += std::fabs(it_p->second);
            ++it_p;
        } else if (it_p == p.end() || it_q->first < it_p->first) {
            acc += std::fabs(it_q->second);
            ++it_q;
        } else {
            acc += std::fabs(it_p->second - it_q->second);
            ++it_p;
            ++it_q;
        }
    }
    return 0.5 * acc;
}

std::map<std::int64_t, double> empirical_pmf(std::span<const std::int64_t> values) {
    if (values.empty()) throw insufficient_data_error("empirical_pmf: empty sample");
    std::map<std::int64_t, double> out;
    for (std::int64_t v : values) out[v] += 1.0;
    const double n = static_cast<double>(values.size());
    for (auto& [k, v] : out) v /= n;
    return out;
}

}  // namespace lobscale
