#include "lobscale/placement.hpp"

#include <cmath>

namespace lobscale {

PlacementPmf::PlacementPmf(std::int64_t lo, std::vector<double> mass)
    : lo_(lo), mass_(std::move(mass)) {
    if (mass_.empty()) throw config_error("placement pmf: empty support");
    double total = 0.0;
    for (double m : mass_) {
        if (!(m >= 0.0) || !std::isfinite(m))
            throw config_error("placement pmf: masses must be finite and >= 0");
        total += m;
    }
    if (!(total > 0.0)) throw config_error("placement pmf: zero total mass");
    for (double& m : mass_) m /= total;
    tail_.resize(mass_.size());
    double acc = 0.0;
    for (std::size_t j = mass_.size(); j-- > 0;) {
        acc += mass_[j];
        tail_[j] = acc;
    }
    tail_[0] = 1.0;  // normalized by construction
}

PlacementPmf uniform_pmf(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw config_error("uniform_pmf: hi < lo");
    return PlacementPmf(lo, std::vector<double>(static_cast<std::size_t>(hi - lo + 1), 1.0));
}

PlacementPmf power_survival_pmf(double v, std::int64_t hi) {
    if (!(v > 0.0) || hi < 1) throw config_error("power_survival_pmf: need v > 0, hi >= 1");
    std::vector<double> mass(static_cast<std::size_t>(hi));
    for (std::int64_t i = 1; i <= hi; ++i) {
        double s_i = std::pow(static_cast<double>(i), -v);
        double s_next = (i == hi) ? 0.0 : std::pow(static_cast<double>(i + 1), -v);
        mass[static_cast<std::size_t>(i - 1)] = s_i - s_next;
    }
    return PlacementPmf(1, std::move(mass));
}

PlacementPmf power_mass_pmf(double u, double c2, double delta, std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw config_error("power_mass_pmf: hi < lo");
    if (!(c2 + static_cast<double>(lo) * delta > 0.0))
        throw config_error("power_mass_pmf: c2 + lo*delta must be positive");
    std::vector<double> mass(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t i = lo; i <= hi; ++i)
        mass[static_cast<std::size_t>(i - lo)] =
            std::pow(c2 + static_cast<double>(i) * delta, -u);
    return PlacementPmf(lo, std::move(mass));
}

PlacementFamily at_or_behind_quote_family(double u, std::int64_t width) {
    if (width < 1) throw config_error("at_or_behind_quote_family: width >= 1 required");
    return [u, width](std::int64_t /*spread_ticks*/) {
        return power_mass_pmf(u, 1.0, 1.0, 0, width - 1);
    };
}

PlacementFamily inside_spread_family(double u, double c2, double delta, std::int64_t hi) {
    return [u, c2, delta, hi](std::int64_t spread_ticks) {
        std::int64_t lo = min_relative_tick(spread_ticks);
        return power_mass_pmf(u, c2, delta, lo, std::max(hi, lo));
    };
}

}  // namespace lobscale
