#include "lobscale/prelimit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "lobscale/stats.hpp"

namespace lobscale {

double ScalingScheme::sqrt_n() const { return std::sqrt(static_cast<double>(n)); }

double ScalingScheme::delta() const {
    double base = 1.0 / sqrt_n();
    if (delta_mode == DeltaMode::exact) return base;
    return base / std::log(static_cast<double>(n) + 1.0);
}

StepDraws draw_step(const ReturnLaw& law, const ScalingScheme& scheme, RngStream& rng) {
    if (!scheme.admits_beta(law.beta))
        throw config_error("draw_step: need 2*beta/sqrt(n) <= 1 for the sign-flip law");
    const double q = scheme.q_n();
    const double p_r = 0.5 * (1.0 + 2.0 * law.beta / scheme.sqrt_n());
    StepDraws d;
    d.i_a = rng.bernoulli(q);
    d.r_a = rng.bernoulli(p_r);
    d.u_a = law.u_law.sample(rng);
    if (d.i_a) d.v_a = law.v_law.sample(rng);
    d.i_b = rng.bernoulli(q);
    d.r_b = rng.bernoulli(p_r);
    d.u_b = law.u_law.sample(rng);
    if (d.i_b) d.v_b = law.v_law.sample(rng);
    return d;
}

std::int64_t return_increment_ticks(std::int64_t spread_ticks, bool jump, bool sign_flip,
                                    double u, double v, const ScalingScheme& scheme) {
    if (jump) {
        // [s V / (2 delta)] delta in ticks: floor(s_ticks * V / 2)
        return static_cast<std::int64_t>(std::floor(static_cast<double>(spread_ticks) * v / 2.0));
    }
    // [U / (sqrt(n) delta)] delta in ticks, sign applied after the floor
    std::int64_t mag =
        static_cast<std::int64_t>(std::floor(u / (scheme.sqrt_n() * scheme.delta())));
    return sign_flip ? -mag : mag;
}

PairState step_pair(const PairState& st, const StepDraws& d, const ScalingScheme& scheme) {
    const std::int64_t cap = cap_ticks(st.s_ticks);
    std::int64_t da = return_increment_ticks(st.s_ticks, d.i_a, d.r_a, d.u_a, d.v_a, scheme);
    std::int64_t db = return_increment_ticks(st.s_ticks, d.i_b, d.r_b, d.u_b, d.v_b, scheme);
    da = std::max(da, cap);
    db = std::max(db, cap);
    return {st.s_ticks + da + db, st.m_ticks + da - db};
}

PairState step_auxiliary(const PairState& st, const StepDraws& d, const ScalingScheme& scheme) {
    std::int64_t da = return_increment_ticks(st.s_ticks, d.i_a, d.r_a, d.u_a, d.v_a, scheme);
    std::int64_t db = return_increment_ticks(st.s_ticks, d.i_b, d.r_b, d.u_b, d.v_b, scheme);
    std::int64_t joint = std::max(da + db, -st.s_ticks);
    return {st.s_ticks + joint, st.m_ticks + da - db};
}

CoupledPaths simulate_coupled(const ReturnLaw& law, const ScalingScheme& scheme,
                              std::int64_t s0_ticks, std::int64_t m0_ticks, double horizon,
                              RngStream& rng) {
    if (!law.valid() || !scheme.valid()) throw config_error("simulate_coupled: invalid inputs");
    if (s0_ticks < 0) throw config_error("simulate_coupled: s0 must be >= 0");

    CoupledPaths out;
    out.delta = scheme.delta();
    PairState target{s0_ticks, m0_ticks};
    PairState aux{s0_ticks, m0_ticks};
    std::int64_t jumps = 0;

    double t = 0.0;
    out.t.push_back(0.0);
    out.s_bar.push_back(target.s_ticks);
    out.m_bar.push_back(target.m_ticks);
    out.s_tilde.push_back(aux.s_ticks);
    out.m_tilde.push_back(aux.m_ticks);
    out.jump_count.push_back(0);

    const double rate = scheme.step_rate();
    for (;;) {
        t += rng.exponential(rate);
        if (t > horizon) break;
        StepDraws d = draw_step(law, scheme, rng);
        // Shared draws; each process evaluates the spread-dependent jump
        // bracket at its own spread.
        PairState next_target = step_pair(target, d, scheme);
        PairState next_aux = step_auxiliary(aux, d, scheme);
        target = next_target;
        aux = next_aux;
        jumps += (d.i_a ? 1 : 0) + (d.i_b ? 1 : 0);

        out.t.push_back(t);
        out.s_bar.push_back(target.s_ticks);
        out.m_bar.push_back(target.m_ticks);
        out.s_tilde.push_back(aux.s_ticks);
        out.m_tilde.push_back(aux.m_ticks);
        out.jump_count.push_back(jumps);
    }
    return out;
}

CouplingCheck check_coupling_bound(const CoupledPaths& paths, double c,
                                   const ScalingScheme& scheme) {
    CouplingCheck out;
    const double two_over_sqrt_n = 2.0 / scheme.sqrt_n();
    for (std::size_t k = 0; k < paths.s_bar.size(); ++k) {
        std::int64_t gap_ticks = paths.s_bar[k] - paths.s_tilde[k];
        double gap = static_cast<double>(gap_ticks) * paths.delta;
        if (gap_ticks < 0) ++out.violations_lower;
        double bound =
            (std::pow(1.0 + c, static_cast<double>(paths.jump_count[k])) - 1.0) * two_over_sqrt_n;
        if (gap > bound * (1.0 + 1e-12) + 1e-15) ++out.violations_upper;
        out.max_gap = std::max(out.max_gap, gap);
    }
    return out;
}

namespace {

struct Endpoint {
    double s, m;
};

Endpoint run_endpoint(const ReturnLaw& law, const ScalingScheme& scheme, std::int64_t s0_ticks,
                      std::int64_t m0_ticks, double horizon, RngStream& rng) {
    PairState st{s0_ticks, m0_ticks};
    long steps = rng.poisson(scheme.step_rate() * horizon);
    for (long k = 0; k < steps; ++k) {
        StepDraws d = draw_step(law, scheme, rng);
        st = step_pair(st, d, scheme);
    }
    double delta = scheme.delta();
    return {static_cast<double>(st.s_ticks) * delta, static_cast<double>(st.m_ticks) * delta};
}

}  // namespace

PrelimitMarginals prelimit_marginals(const ReturnLaw& law, const ScalingScheme& scheme, double s0,
                                     double m0, double horizon, std::uint64_t seed,
                                     std::int64_t replications, int threads) {
    if (!law.valid() || !scheme.valid())
        throw config_error("prelimit_marginals: invalid inputs");
    const double delta = scheme.delta();
    const std::int64_t s0_ticks = std::llround(s0 / delta);
    const std::int64_t m0_ticks = std::llround(m0 / delta);

    PrelimitMarginals out;
    out.s.resize(static_cast<std::size_t>(replications));
    out.m.resize(static_cast<std::size_t>(replications));
    auto work = [&](std::int64_t rep) {
        RngStream rng(seed, static_cast<std::uint64_t>(rep));
        Endpoint e = run_endpoint(law, scheme, s0_ticks, m0_ticks, horizon, rng);
        out.s[static_cast<std::size_t>(rep)] = e.s;
        out.m[static_cast<std::size_t>(rep)] = e.m;
    };
    if (threads <= 1) {
        for (std::int64_t r = 0; r < replications; ++r) work(r);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::int64_t> next{0};
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    std::int64_t r = next.fetch_add(1);
                    if (r >= replications) return;
                    work(r);
                }
            });
        for (auto& th : pool) th.join();
    }
    return out;
}

SdeParams limit_matched_params(const ReturnLaw& law, const ScalingScheme& scheme) {
    SdeParams p;
    p.eta = 8.0 * scheme.mu * law.beta * law.u_law.mean();
    p.sigma2 = 2.0 * scheme.mu * law.u_law.second_moment();
    p.jump_intensity = 2.0 * scheme.gamma * scheme.mu;
    p.v_law = law.v_law;
    return p;
}

ConvergenceReport convergence_probe(const ReturnLaw& law, const std::vector<std::int64_t>& ns,
                                    DeltaMode mode, double gamma, double mu, double s0, double m0,
                                    double horizon, std::int64_t replications, std::uint64_t seed,
                                    int threads) {
    ConvergenceReport report;
    ScalingScheme ref_scheme{ns.empty() ? 10000 : ns.back(), mode, gamma, mu};
    SdeParams sde = limit_matched_params(law, ref_scheme);

    // SDE reference marginal: twice the replications of the discrete side to
    // keep the two-sample KS noise floor dominated by the discrete side.
    SdeEndpoints ref = sde_endpoints(s0, m0, sde, horizon, 1e-3, seed, 1u << 20, 2 * replications,
                                     threads);

    for (std::int64_t n : ns) {
        ScalingScheme scheme{n, mode, gamma, mu};
        PrelimitMarginals mg =
            prelimit_marginals(law, scheme, s0, m0, horizon, seed + static_cast<std::uint64_t>(n),
                               replications, threads);
        report.n.push_back(n);
        report.ks_s.push_back(ks_statistic(mg.s, ref.s));
        report.ks_m.push_back(ks_statistic(mg.m, ref.m));
    }
    return report;
}

}  // namespace lobscale
