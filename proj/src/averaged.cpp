#include "lobscale/averaged.hpp"

#include <algorithm>
#include <cmath>

namespace lobscale {

std::int64_t JumpPmf::sample(RngStream& rng) const {
    double u = rng.uniform() * cum.back();
    auto it = std::lower_bound(cum.begin(), cum.end(), u);
    std::size_t j = static_cast<std::size_t>(it - cum.begin());
    if (j >= cum.size()) j = cum.size() - 1;
    return lo + static_cast<std::int64_t>(j);
}

JumpPmf jump_pmf_from_theta(const ThetaCurve& theta) {
    JumpPmf out;
    out.lo = theta.lo;
    const std::size_t n = theta.value.size();
    out.prob.resize(n);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double next = (j + 1 < n) ? theta.value[j + 1] : theta.value.back();
        if (j + 1 >= n) next = 0.0;  // finite-support curve ends at zero
        double p = theta.value[j] - next;
        if (p < 0.0) p = 0.0;  // guard monotonicity rounding
        out.prob[j] = p;
        acc += p;
        out.cum.push_back(acc);
    }
    if (!(acc > 0.999999 && acc < 1.000001))
        throw degeneracy_error("jump_pmf_from_theta: theta curve does not reach 0 (mass " +
                               std::to_string(acc) + ")");
    return out;
}

JumpLaw::JumpLaw(std::function<ThetaCurve(std::int64_t)> theta_family, double mu)
    : theta_family_(std::move(theta_family)), mu_(mu) {
    if (!(mu >= 0.0)) throw config_error("JumpLaw: mu must be >= 0");
    if (!theta_family_) throw config_error("JumpLaw: empty theta family");
}

JumpLaw JumpLaw::from_placement(PlacementFamily family, double c_p, double mu) {
    return JumpLaw(
        [family = std::move(family), c_p](std::int64_t spread_ticks) {
            return theta_closed_form(family(spread_ticks), c_p);
        },
        mu);
}

const JumpPmf& JumpLaw::pmf_for_spread(std::int64_t spread_ticks) {
    auto it = memo_.find(spread_ticks);
    if (it == memo_.end()) {
        ThetaCurve theta = theta_family_(spread_ticks);
        it = memo_.emplace(spread_ticks, jump_pmf_from_theta(theta)).first;
    }
    return it->second;
}

std::pair<std::int64_t, std::int64_t> sample_jump(const Quote& quote, JumpLaw& law,
                                                  RngStream& rng) {
    const JumpPmf& pmf = law.pmf_for_spread(quote.spread_ticks());
    std::int64_t da = pmf.sample(rng);
    std::int64_t db = -pmf.sample(rng);  // bid decrement drawn from the same law
    return {da, db};
}

TradePath simulate_jump_process(Quote initial, JumpLaw& law, double horizon, RngStream& rng) {
    if (!(horizon > 0.0)) throw config_error("simulate_jump_process: horizon must be > 0");
    if (!initial.valid()) throw config_error("simulate_jump_process: initial quote crossed");

    TradePath path;
    Quote q = initial;
    double t = 0.0;
    const double rate = 2.0 * law.mu();
    if (rate == 0.0) return path;

    for (;;) {
        t += rng.exponential(rate);
        if (t > horizon) break;
        auto [da, db] = sample_jump(q, law, rng);
        TradeRecord rec;
        rec.t = t;
        rec.side = rng.bernoulli(0.5) ? Side::ask : Side::bid;
        rec.quote_before = q;
        q.ask_ticks += da;
        q.bid_ticks += db;
        rec.quote_after = q;
        rec.d_ask_ticks = da;
        rec.d_bid_ticks = db;
        if (!q.valid())
            throw degeneracy_error("simulate_jump_process: spread went negative (theta support)");
        path.trades.push_back(rec);
    }
    return path;
}

}  // namespace lobscale
