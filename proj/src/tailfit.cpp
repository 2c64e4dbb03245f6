#include "lobscale/tailfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lobscale/common.hpp"

namespace lobscale {

namespace {

// Least squares of y on (1, x, x^2); returns (b, c) from y ~ a + b x + c x^2.
// Solved via the normal equations after centering x, which is plenty stable
// for the handful of decades a tail spans.
void quad_fit(const std::vector<double>& x, const std::vector<double>& y, double& slope,
              double& curv) {
    const std::size_t n = x.size();
    double mx = 0.0;
    for (double v : x) mx += v;
    mx /= static_cast<double>(n);

    double s2 = 0, s3 = 0, s4 = 0, sy = 0, sxy = 0, sx2y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double cx = x[i] - mx;
        double cx2 = cx * cx;
        s2 += cx2;
        s3 += cx2 * cx;
        s4 += cx2 * cx2;
        sy += y[i];
        sxy += cx * y[i];
        sx2y += cx2 * y[i];
    }
    double ny = static_cast<double>(n);
    // Normal equations for the centered fit y ~ a + b cx + c cx^2:
    // [ n   0   s2 ] [a]   [ sy   ]
    // [ 0   s2  s3 ] [b] = [ sxy  ]
    // [ s2  s3  s4 ] [c]   [ sx2y ]
    // Eliminating a and b gives a scalar equation for c.
    if (!(s2 > 0.0)) {
        slope = 0.0;
        curv = 0.0;
        return;
    }
    double denom = s4 - s2 * s2 / ny - s3 * s3 / s2;
    double numer = sx2y - sy * s2 / ny - sxy * s3 / s2;
    double c = (std::fabs(denom) > 1e-30 * s4) ? numer / denom : 0.0;
    slope = (sxy - c * s3) / s2;
    curv = c;
}

TailFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ss, double k_frac) {
    std::vector<double> lx(xs.size()), ly(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ss[i]);
    }
    double slope = 0.0, curv = 0.0;
    quad_fit(lx, ly, slope, curv);

    // Pure linear fit for the slope estimate itself.
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx <= 0.0) throw insufficient_data_error("fit_tail: no variation in the tail region");
    double lin_slope = sxy / sxx;

    TailFit out;
    out.k_frac = k_frac;
    out.loglog_slope = -lin_slope;
    out.curvature = curv;
    out.power_law_plausible = std::fabs(curv) < 0.5;
    // scale c1 from S(x) = (c1 x)^-v: log c1 = -mean(log S)/v - mean(log x)
    out.scale = std::exp(my / lin_slope - mx);
    return out;
}

}  // namespace

TailFit fit_tail(std::span<const double> samples, double k_frac) {
    if (!(k_frac > 0.0 && k_frac <= 0.5)) throw config_error("fit_tail: k_frac must be in (0, 0.5]");
    std::vector<double> x(samples.begin(), samples.end());
    std::erase_if(x, [](double v) { return !(v > 0.0) || !std::isfinite(v); });
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    const std::size_t k = static_cast<std::size_t>(std::floor(k_frac * static_cast<double>(n)));
    if (k < 100) throw insufficient_data_error("fit_tail: fewer than 100 tail points");

    const double x_k = x[n - k - 1];  // threshold order statistic
    if (!(x_k > 0.0) || x.back() <= x_k)
        throw insufficient_data_error("fit_tail: insufficient variation above the threshold");

    double acc = 0.0;
    for (std::size_t i = n - k; i < n; ++i) acc += std::log(x[i] / x_k);
    const double hill_gamma = acc / static_cast<double>(k);
    if (!(hill_gamma > 0.0)) throw insufficient_data_error("fit_tail: degenerate Hill estimate");

    // Empirical survival over the tail grid (distinct order statistics).
    std::vector<double> xs, ss;
    xs.reserve(k);
    ss.reserve(k);
    for (std::size_t i = n - k; i < n; ++i) {
        if (!xs.empty() && x[i] == xs.back()) {
            ss.back() = static_cast<double>(n - i) / static_cast<double>(n);
            continue;
        }
        xs.push_back(x[i]);
        ss.push_back(static_cast<double>(n - i) / static_cast<double>(n));
    }
    TailFit out = fit_loglog(xs, ss, k_frac);
    out.hill = 1.0 / hill_gamma;
    out.exponent = out.hill;
    // scale from the threshold: S(x_k) = k/n = (c1 x_k)^-v
    out.scale = std::pow(static_cast<double>(k) / static_cast<double>(n), -1.0 / out.exponent) / x_k;
    return out;
}

TailFit fit_tail_survival(std::span<const double> x, std::span<const double> survival,
                          double k_frac) {
    if (!(k_frac > 0.0 && k_frac <= 0.5))
        throw config_error("fit_tail_survival: k_frac must be in (0, 0.5]");
    if (x.size() != survival.size()) throw config_error("fit_tail_survival: size mismatch");
    std::vector<double> xs, ss;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0 && survival[i] > 0.0 && survival[i] <= 1.0) {
            xs.push_back(x[i]);
            ss.push_back(survival[i]);
        }
    }
    const std::size_t k = static_cast<std::size_t>(std::floor(k_frac * static_cast<double>(xs.size())));
    if (k < 100) throw insufficient_data_error("fit_tail_survival: fewer than 100 tail points");
    std::vector<double> tx(xs.end() - static_cast<std::ptrdiff_t>(k), xs.end());
    std::vector<double> ts(ss.end() - static_cast<std::ptrdiff_t>(k), ss.end());
    TailFit out = fit_loglog(tx, ts, k_frac);
    out.hill = std::numeric_limits<double>::quiet_NaN();
    out.exponent = out.loglog_slope;
    return out;
}

}  // namespace lobscale
