#include "lobscale/theta.hpp"

#include <cmath>

namespace lobscale {

CancellationCurve cancellation_from_placement(const PlacementPmf& p, double lambda, double c_p) {
    if (!(c_p > 0.0)) throw config_error("cancellation_from_placement: c_p must be > 0");
    if (!(lambda > 0.0)) throw config_error("cancellation_from_placement: lambda must be > 0");

    CancellationCurve out;
    out.lo = p.lo();
    out.lambda = lambda;
    out.c_p = c_p;
    out.rate.resize(p.size());

    const double scale = lambda / c_p;
    for (std::int64_t i = p.lo(); i <= p.hi(); ++i) {
        double mass = p.at(i);
        double s_from = p.tail_mass(i);      // 1 - F(i-1)
        double s_after = p.tail_mass(i + 1);  // 1 - F(i)
        double rate;
        if (mass == 0.0) {
            rate = scale * s_from;  // analytic limit of the hazard ratio
        } else if (s_after == 0.0) {
            // Terminal support tick: hazard denominator diverges, alpha -> 0.
            // Interior zeros of the tail with mass beyond them are malformed.
            if (i < p.hi()) throw degeneracy_error("cancellation_from_placement: tail mass hits zero at an interior tick");
            rate = 0.0;
        } else {
            rate = scale * mass / (std::log(s_from) - std::log(s_after));
        }
        out.rate[static_cast<std::size_t>(i - p.lo())] = rate;
    }
    return out;
}

ThetaCurve theta_from_queue_params(const PlacementPmf& p, const CancellationCurve& alpha,
                                   double lambda) {
    if (!(lambda > 0.0)) throw config_error("theta_from_queue_params: lambda must be > 0");

    ThetaCurve out;
    out.lo = p.lo();
    out.value.resize(p.size() + 1);
    out.value[0] = 1.0;

    double log_sum = 0.0;  // sum of lambda p(j)/alpha(j) up to the current tick
    bool collapsed = false;
    for (std::int64_t i = p.lo(); i <= p.hi(); ++i) {
        std::size_t j = static_cast<std::size_t>(i - p.lo());
        if (!collapsed) {
            double mass = p.at(i);
            double a = alpha.at(i);
            if (mass > 0.0 && a <= 0.0) {
                // Infinite-server occupancy diverges. Past the terminal tick of
                // the support this is the normal theta -> 0 collapse; at an
                // interior tick the parameterization is degenerate.
                if (p.tail_mass(i + 1) > 0.0)
                    throw degeneracy_error(
                        "theta_from_queue_params: alpha = 0 with placement mass at an interior tick");
                collapsed = true;
            } else if (mass > 0.0) {
                log_sum += lambda * mass / a;
            }
        }
        out.value[j + 1] = collapsed ? 0.0 : std::exp(-log_sum);
    }
    return out;
}

ThetaCurve theta_closed_form(const PlacementPmf& p, double c_p) {
    if (!(c_p > 0.0)) throw config_error("theta_closed_form: c_p must be > 0");
    ThetaCurve out;
    out.lo = p.lo();
    out.value.resize(p.size() + 1);
    for (std::size_t j = 0; j < out.value.size(); ++j) {
        double s = p.tail_mass(p.lo() + static_cast<std::int64_t>(j));
        out.value[j] = (s <= 0.0) ? 0.0 : std::pow(s, c_p);
    }
    out.value[0] = 1.0;
    return out;
}

ThetaCurve theta_other_regime(const std::function<double(std::int64_t)>& survival_F_bar,
                              double lambda, double mu, double alpha, std::int64_t lo,
                              std::int64_t hi) {
    if (!(lambda > 0.0 && mu > 0.0 && alpha > 0.0))
        throw config_error("theta_other_regime: lambda, mu, alpha must be > 0");
    if (hi < lo) throw config_error("theta_other_regime: hi < lo");

    ThetaCurve out;
    out.lo = lo;
    out.value.resize(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t i = lo; i <= hi; ++i) {
        double fbar = survival_F_bar(i);
        if (!(fbar >= 0.0 && fbar <= 1.0))
            throw config_error("theta_other_regime: survival values must lie in [0, 1]");
        double sum = 1.0;   // l = 0 term
        double term = 1.0;
        for (long l = 1; l < 100000; ++l) {
            term *= lambda * fbar / (mu + static_cast<double>(l) * alpha);
            sum += term;
            if (term < 1e-15 * sum) break;
        }
        out.value[static_cast<std::size_t>(i - lo)] = 1.0 / sum;
    }
    return out;
}

double calibrate_patience_ratio(const PlacementPmf& p, const ThetaCurve& target) {
    double sxx = 0.0, sxy = 0.0;
    std::size_t n_used = 0;
    for (std::int64_t i = p.lo() + 1; i <= p.hi(); ++i) {
        double s = p.tail_mass(i);
        double th = target.at(i);
        if (s <= 0.0 || s >= 1.0 || th <= 0.0 || th >= 1.0) continue;
        double x = std::log(s);
        double y = std::log(th);
        sxx += x * x;
        sxy += x * y;
        ++n_used;
    }
    if (n_used == 0 || sxx == 0.0)
        throw insufficient_data_error(
            "calibrate_patience_ratio: no interior ticks with theta in (0, 1)");
    double c_p = sxy / sxx;
    if (!(c_p > 0.0)) throw degeneracy_error("calibrate_patience_ratio: fitted c_p <= 0");
    return c_p;
}

}  // namespace lobscale
