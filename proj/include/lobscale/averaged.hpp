#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "lobscale/micro_sim.hpp"
#include "lobscale/rng.hpp"
#include "lobscale/theta.hpp"

namespace lobscale {

/// Increment pmf obtained by differencing a theta curve:
/// P(jump = i) = theta(i) - theta(i+1), supported on [lo, hi].
struct JumpPmf {
    std::int64_t lo = 0;
    std::vector<double> prob;
    std::vector<double> cum;

    double total() const { return cum.empty() ? 0.0 : cum.back(); }
    std::int64_t sample(RngStream& rng) const;
};

JumpPmf jump_pmf_from_theta(const ThetaCurve& theta);

/// State-dependent jump law of the averaged per-trade price process: jumps
/// arrive at rate 2*mu; the ask moves up by i ticks and the bid down by j
/// ticks with the product probability [theta(i)-theta(i+1)][theta(j)-theta(j+1)],
/// theta taken at the pre-jump quote. Built-in theta families depend on the
/// quote only through the spread, so pmfs are memoized per spread.
class JumpLaw {
public:
    JumpLaw(std::function<ThetaCurve(std::int64_t spread_ticks)> theta_family, double mu);

    /// Convenience: law induced by a placement family and patience ratio.
    static JumpLaw from_placement(PlacementFamily family, double c_p, double mu);

    const JumpPmf& pmf_for_spread(std::int64_t spread_ticks);
    double mu() const { return mu_; }

private:
    std::function<ThetaCurve(std::int64_t)> theta_family_;
    double mu_;
    std::map<std::int64_t, JumpPmf> memo_;
};

/// Draws one jump at the given quote. Returns signed tick changes
/// (d_ask >= min_relative_tick, d_bid <= -min_relative_tick): the ask moves by
/// +i ticks and the bid by -j ticks, independently.
std::pair<std::int64_t, std::int64_t> sample_jump(const Quote& quote, JumpLaw& law,
                                                  RngStream& rng);

/// Pure-jump simulation: Poisson(2*mu) jump times; at each jump the quote
/// moves by an independent theta-difference draw per side. The emitted path
/// reuses the TradeRecord layout (quote_before = pre-jump, quote_after =
/// post-jump).
TradePath simulate_jump_process(Quote initial, JumpLaw& law, double horizon, RngStream& rng);

}  // namespace lobscale
