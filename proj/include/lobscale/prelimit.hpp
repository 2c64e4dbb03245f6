#pragma once

#include <cstdint>
#include <vector>

#include "lobscale/lattice.hpp"
#include "lobscale/rng.hpp"
#include "lobscale/sde.hpp"

namespace lobscale {

/// Per-trade return law of the scaled price recursion. U governs the small
/// clustered-at-the-quote moves, V the rare spread-proportional jumps.
struct ReturnLaw {
    double q = 0.0;      // jump probability P(I = 1) per side per step
    double beta = 0.25;  // drift asymmetry of the sign flip R
    UniformMixtureU u_law{0.25, 1.0};
    TruncParetoV v_law{2.5, 0.1, 1.0};

    bool valid() const {
        return q >= 0.0 && q < 1.0 && beta > 0.0 && u_law.valid() && v_law.valid();
    }
};

enum class DeltaMode {
    exact,  // delta_n = n^-1/2
    fine    // delta_n = n^-1/2 / log(n + 1), a concrete o(n^-1/2)
};

/// Scale-n system: market orders arrive at rate n*mu per side (2*n*mu step
/// clock), jump probability q_n = gamma / n, tick delta_n per mode.
struct ScalingScheme {
    std::int64_t n = 10000;
    DeltaMode delta_mode = DeltaMode::fine;
    double gamma = 0.5;
    double mu = 1.0;

    double sqrt_n() const;
    double delta() const;
    double q_n() const { return gamma / static_cast<double>(n); }
    double step_rate() const { return 2.0 * static_cast<double>(n) * mu; }
    bool valid() const {
        return n >= 4 && gamma >= 0.0 && q_n() < 1.0 && mu > 0.0;
    }
    /// The sign flip needs P(R=1) = (1 + 2 beta / sqrt(n)) / 2 <= 1.
    bool admits_beta(double beta) const { return 2.0 * beta / sqrt_n() <= 1.0; }
};

/// One step's shared randomness; the target and auxiliary processes consume
/// the same tuple so the coupling is path by path. V is only meaningful when
/// the corresponding I is set.
struct StepDraws {
    bool i_a = false, i_b = false;
    bool r_a = false, r_b = false;
    double u_a = 0.0, u_b = 0.0;
    double v_a = 0.0, v_b = 0.0;
};

StepDraws draw_step(const ReturnLaw& law, const ScalingScheme& scheme, RngStream& rng);

/// The spread-dependent per-side increment in ticks:
/// (1-I) (-1)^R [U / (sqrt(n) delta)] + I [s V / 2] with floor toward
/// -infinity inside each bracket.
std::int64_t return_increment_ticks(std::int64_t spread_ticks, bool jump, bool sign_flip,
                                    double u, double v, const ScalingScheme& scheme);

/// Most aggressive allowed move: the incoming order may sit at the mid but
/// not beyond, so the per-side cap is -floor(spread/2) ticks.
inline std::int64_t cap_ticks(std::int64_t spread_ticks) { return -(spread_ticks / 2); }

/// Target process state in ticks: spread s = a - b and m = a + b.
struct PairState {
    std::int64_t s_ticks = 0;
    std::int64_t m_ticks = 0;
};

PairState step_pair(const PairState& st, const StepDraws& d, const ScalingScheme& scheme);

/// Auxiliary coupled process: the joint cap max(sum, -S) replaces the
/// per-side caps and the m update is uncapped.
PairState step_auxiliary(const PairState& st, const StepDraws& d, const ScalingScheme& scheme);

struct CoupledPaths {
    std::vector<double> t;        // step times t_k
    std::vector<std::int64_t> s_bar, m_bar;    // target, ticks
    std::vector<std::int64_t> s_tilde, m_tilde;  // auxiliary, ticks
    std::vector<std::int64_t> jump_count;        // N(t_k) = sum (I_a + I_b)
    double delta = 0.0;
};

/// Simulates target and auxiliary processes on shared draws over [0, horizon]
/// with Poisson(2 n mu) step times, recording every step.
CoupledPaths simulate_coupled(const ReturnLaw& law, const ScalingScheme& scheme,
                              std::int64_t s0_ticks, std::int64_t m0_ticks, double horizon,
                              RngStream& rng);

/// Pathwise coupling check: 0 <= s_bar - s_tilde <= ((1+c)^N - 1) * 2/sqrt(n)
/// at every step. Returns the number of violations (0 when the v_law cap c
/// bounds |V|).
struct CouplingCheck {
    std::int64_t violations_lower = 0;
    std::int64_t violations_upper = 0;
    double max_gap = 0.0;  // max of (s_bar - s_tilde) * delta
};
CouplingCheck check_coupling_bound(const CoupledPaths& paths, double c,
                                   const ScalingScheme& scheme);

/// Endpoint marginals of the target process at the horizon, one per
/// replication (stream_id = replication index, parallel-safe).
struct PrelimitMarginals {
    std::vector<double> s;  // real units
    std::vector<double> m;
};
PrelimitMarginals prelimit_marginals(const ReturnLaw& law, const ScalingScheme& scheme,
                                     double s0, double m0, double horizon, std::uint64_t seed,
                                     std::int64_t replications, int threads);

/// SDE parameters matched to the discrete recursion's per-step moments at
/// step rate 2 n mu: per-side drift and variance accumulate over 2 n mu
/// steps per unit time and both sides load the spread, giving
///   eta = 8 mu beta E[U], sigma^2 per Brownian = 2 mu E[U^2],
///   per-channel jump intensity 2 gamma mu.
SdeParams limit_matched_params(const ReturnLaw& law, const ScalingScheme& scheme);

/// Kolmogorov-Smirnov distances between the discrete endpoint marginals and
/// the SDE endpoint marginals, per scale n.
struct ConvergenceReport {
    std::vector<std::int64_t> n;
    std::vector<double> ks_s;
    std::vector<double> ks_m;
};
ConvergenceReport convergence_probe(const ReturnLaw& law, const std::vector<std::int64_t>& ns,
                                    DeltaMode mode, double gamma, double mu, double s0, double m0,
                                    double horizon, std::int64_t replications, std::uint64_t seed,
                                    int threads);

}  // namespace lobscale
