#include "lobscale/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "lobscale/averaged.hpp"
#include "lobscale/micro_sim.hpp"
#include "lobscale/prelimit.hpp"
#include "lobscale/sde.hpp"
#include "lobscale/stats.hpp"
#include "lobscale/tailfit.hpp"
#include "lobscale/theta.hpp"

namespace lobscale {

namespace {

namespace fs = std::filesystem;

void check_keys(const json& params, std::initializer_list<const char*> allowed,
                const std::string& experiment) {
    for (auto it = params.begin(); it != params.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw config_error("experiment '" + experiment + "': unknown config key '" + it.key() +
                               "'");
    }
}

json merged_defaults(const json& params, json defaults) {
    for (auto it = params.begin(); it != params.end(); ++it) defaults[it.key()] = it.value();
    return defaults;
}

/// Runs replicated work items on a bounded pool; results land in an
/// index-addressed vector so aggregation order never depends on scheduling.
template <typename F>
void parallel_reps(std::int64_t reps, int threads, F&& work) {
    if (threads <= 1) {
        for (std::int64_t r = 0; r < reps; ++r) work(r);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    int n = std::min<std::int64_t>(threads, reps) > 0 ? static_cast<int>(std::min<std::int64_t>(threads, reps)) : 1;
    for (int w = 0; w < n; ++w)
        pool.emplace_back([&] {
            for (;;) {
                std::int64_t r = next.fetch_add(1);
                if (r >= reps) return;
                work(r);
            }
        });
    for (auto& th : pool) th.join();
}

struct SdeStudyRow {
    double mean = 0.0, mean_se = 0.0;
    double stddev = 0.0;
    double sigma1_hat = 0.0, sigma1_se = 0.0;
    double ratio = 0.0;
};

/// Replicated stationary study of the jump-diffusion: per replication the
/// path-average spread moments and sigma1 of the mid series; aggregates are
/// means across replications with standard errors.
SdeStudyRow sde_stationary_study(const SdeParams& params, double s0, double m0, double horizon,
                                 double dt, double burn_in, std::int64_t reps, std::uint64_t seed,
                                 std::uint64_t stream_base, int threads,
                                 std::vector<double>* pooled_spread = nullptr) {
    std::vector<double> means(static_cast<std::size_t>(reps));
    std::vector<double> stds(static_cast<std::size_t>(reps));
    std::vector<double> s1s(static_cast<std::size_t>(reps));
    std::vector<std::vector<double>> spreads(static_cast<std::size_t>(reps));

    parallel_reps(reps, threads, [&](std::int64_t r) {
        RngStream rng(seed, stream_base + static_cast<std::uint64_t>(r));
        SdePath path = simulate_sde(s0, m0, params, horizon, dt, rng, 0.1);
        StationaryStats st = stationary_stats(path.s, burn_in);
        const std::size_t skip =
            static_cast<std::size_t>(burn_in * static_cast<double>(path.m.size()));
        std::span<const double> m_tail(path.m.data() + skip, path.m.size() - skip);
        means[static_cast<std::size_t>(r)] = st.mean;
        stds[static_cast<std::size_t>(r)] = st.stddev;
        s1s[static_cast<std::size_t>(r)] = sigma1(m_tail, 0.1);
        if (pooled_spread) {
            auto& dst = spreads[static_cast<std::size_t>(r)];
            dst.assign(path.s.begin() + static_cast<std::ptrdiff_t>(skip), path.s.end());
        }
    });

    SdeStudyRow row;
    auto agg = [&](const std::vector<double>& v, double& out_mean, double* out_se) {
        double m = 0.0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        out_mean = m;
        if (out_se) {
            double ss = 0.0;
            for (double x : v) ss += (x - m) * (x - m);
            *out_se = v.size() > 1
                          ? std::sqrt(ss / static_cast<double>(v.size() - 1) /
                                      static_cast<double>(v.size()))
                          : 0.0;
        }
    };
    agg(means, row.mean, &row.mean_se);
    agg(stds, row.stddev, nullptr);
    agg(s1s, row.sigma1_hat, &row.sigma1_se);
    row.ratio = row.sigma1_hat > 0.0 ? row.mean / row.sigma1_hat : 0.0;
    if (pooled_spread)
        for (auto& v : spreads) pooled_spread->insert(pooled_spread->end(), v.begin(), v.end());
    return row;
}

// ---------------------------------------------------------------------------
// theta-roundtrip

json run_theta_roundtrip(const ExperimentConfig& cfg, const json& p, const std::string& meta) {
    const std::int64_t n_pmfs = p.at("pmf_count");
    const std::vector<double> lambdas = p.at("lambdas");
    const std::vector<double> c_ps = p.at("c_ps");
    const std::int64_t max_support = p.at("max_support");

    RngStream rng(cfg.seed, 0);
    CsvWriter csv(cfg.out_dir / "theta_roundtrip.csv", meta,
                  {"case", "lambda", "c_p", "support", "max_rel_err"});

    double worst = 0.0;
    std::int64_t cases = 0;
    for (std::int64_t k = 0; k < n_pmfs; ++k) {
        std::int64_t width = 3 + static_cast<std::int64_t>(rng.uniform() * static_cast<double>(max_support - 3));
        std::int64_t lo = -3 + static_cast<std::int64_t>(rng.uniform() * 10.0);
        std::vector<double> mass(static_cast<std::size_t>(width));
        for (auto& m : mass) m = std::exp(1.5 * rng.normal());
        PlacementPmf pmf(lo, mass);
        for (double lambda : lambdas) {
            for (double c_p : c_ps) {
                CancellationCurve alpha = cancellation_from_placement(pmf, lambda, c_p);
                ThetaCurve closed = theta_closed_form(pmf, c_p);
                ThetaCurve composed = theta_from_queue_params(pmf, alpha, lambda);
                double err = 0.0;
                for (std::int64_t i = pmf.lo(); i <= pmf.hi() + 1; ++i) {
                    double a = closed.at(i), b = composed.at(i);
                    double denom = std::max({a, b, 1e-300});
                    if (a < 1e-250 && b < 1e-250) continue;
                    err = std::max(err, std::fabs(a - b) / denom);
                }
                csv.row(cases, lambda, c_p, width, err);
                worst = std::max(worst, err);
                ++cases;
            }
        }
    }
    return json{{"cases", cases}, {"max_rel_error", worst}, {"tolerance", 1e-12},
                {"pass", worst < 1e-12}};
}

// ---------------------------------------------------------------------------
// averaging (theta law vs microstructure one-trade increments)

struct AveragingPoint {
    double xi;
    double tv_ask;
    double tv_bid;
};

AveragingPoint averaging_at_xi(double xi, std::int64_t trades, double lambda, double mu,
                               double c_p, double placement_u, std::int64_t width,
                               std::uint64_t seed, std::uint64_t stream) {
    MicroParams mp;
    mp.lambda = lambda;
    mp.mu = mu;
    mp.xi = xi;
    mp.placement = at_or_behind_quote_family(placement_u, width);
    mp.c_p = c_p;
    mp.init_ask_ticks = 1000;
    mp.init_bid_ticks = 992;
    mp.init_orders_per_side = 30;

    TradePath path = run_for_trades(mp, RngStream(seed, stream), trades);

    std::vector<std::int64_t> d_ask, d_bid;
    d_ask.reserve(path.trades.size());
    d_bid.reserve(path.trades.size());
    for (std::size_t k = 1; k < path.trades.size(); ++k) {
        d_ask.push_back(path.trades[k].quote_before.ask_ticks -
                        path.trades[k - 1].quote_before.ask_ticks);
        d_bid.push_back(path.trades[k - 1].quote_before.bid_ticks -
                        path.trades[k].quote_before.bid_ticks);
    }

    PlacementPmf pmf = mp.placement(0);
    CancellationCurve alpha = cancellation_from_placement(pmf, lambda, c_p);
    ThetaCurve theta = theta_from_queue_params(pmf, alpha, lambda);
    JumpPmf law = jump_pmf_from_theta(theta);
    std::map<std::int64_t, double> law_pmf;
    for (std::size_t j = 0; j < law.prob.size(); ++j)
        if (law.prob[j] > 0.0) law_pmf[law.lo + static_cast<std::int64_t>(j)] = law.prob[j];

    return {xi, total_variation(empirical_pmf(d_ask), law_pmf),
            total_variation(empirical_pmf(d_bid), law_pmf)};
}

json run_averaging(const ExperimentConfig& cfg, const json& p, const std::string& meta) {
    const std::vector<double> xis = p.at("xis");
    const std::int64_t trades = p.at("trades_per_xi");
    const double lambda = p.at("lambda");
    const double mu = p.at("mu");
    const double c_p = p.at("c_p");
    const double placement_u = p.at("placement_u");
    const std::int64_t width = p.at("placement_width");

    std::vector<AveragingPoint> points(xis.size());
    parallel_reps(static_cast<std::int64_t>(xis.size()), cfg.threads, [&](std::int64_t idx) {
        points[static_cast<std::size_t>(idx)] =
            averaging_at_xi(xis[static_cast<std::size_t>(idx)], trades, lambda, mu, c_p,
                            placement_u, width, cfg.seed, static_cast<std::uint64_t>(idx));
    });

    CsvWriter csv(cfg.out_dir / "averaging_tv.csv", meta, {"xi", "tv_ask", "tv_bid"});
    bool decreasing = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
        csv.row(points[i].xi, points[i].tv_ask, points[i].tv_bid);
        if (i > 0 && points[i].tv_ask >= points[i - 1].tv_ask) decreasing = false;
    }
    json summary{{"xis", xis},
                 {"tv_ask", json::array()},
                 {"tv_bid", json::array()},
                 {"tv_ask_decreasing", decreasing},
                 {"final_tv_ask", points.back().tv_ask}};
    for (const auto& pt : points) {
        summary["tv_ask"].push_back(pt.tv_ask);
        summary["tv_bid"].push_back(pt.tv_bid);
    }
    return summary;
}

// ---------------------------------------------------------------------------
// convergence (discrete recursion vs limit SDE marginals)

json run_convergence(const ExperimentConfig& cfg, const json& p, const std::string& meta) {
    ReturnLaw law;
    law.beta = p.at("beta");
    law.u_law = UniformMixtureU{p.at("r"), p.at("xi_u")};
    law.v_law = TruncParetoV{p.at("v_u"), p.at("v_rho"), p.at("v_c")};
    std::vector<std::int64_t> ns = p.at("ns");
    DeltaMode mode = (p.at("delta_mode") == "exact") ? DeltaMode::exact : DeltaMode::fine;

    ConvergenceReport rep = convergence_probe(
        law, ns, mode, p.at("gamma"), p.at("mu"), p.at("s0"), p.at("m0"), p.at("horizon"),
        cfg.replications, cfg.seed, cfg.threads);

    CsvWriter csv(cfg.out_dir / "convergence_ks.csv", meta, {"n", "ks_s", "ks_m"});
    for (std::size_t i = 0; i < rep.n.size(); ++i) csv.row(rep.n[i], rep.ks_s[i], rep.ks_m[i]);

    bool decreasing = true;
    for (std::size_t i = 1; i < rep.ks_s.size(); ++i)
        if (rep.ks_s[i] >= rep.ks_s[i - 1]) decreasing = false;
    return json{{"n", rep.n},           {"ks_s", rep.ks_s},
                {"ks_m", rep.ks_m},     {"ks_s_decreasing", decreasing},
                {"final_ks_s", rep.ks_s.back()}};
}

// ---------------------------------------------------------------------------
// table3 / table4 (stationary spread moments and sigma1)

json run_table3(const ExperimentConfig& cfg, const json& p, const std::string& meta) {
    struct Row {
        const char* label;
        double u, beta, xi, r, mu_gamma, ref_mean, ref_std;
    };
    const Row rows[] = {
        {"a", 2.8, 0.25, 0.02, 0.25, 6.75, 0.1704, 0.2068},
        {"b", 2.3, 0.25, 0.02, 0.25, 6.75, 0.1812, 0.2273},
        {"c", 2.8, 0.5, 0.025, 0.25, 6.75, 0.0957, 0.1056},
        {"d", 2.8, 0.25, 0.02, 0.5, 4.5, 0.1576, 0.1663},
    };
    const double mu = p.at("mu");
    const double rho = p.at("rho");
    const double cap = p.at("v_c");
    const double horizon = p.at("horizon");
    const double dt = p.at("dt");
    const double burn_in = p.at("burn_in");

    CsvWriter csv(cfg.out_dir / "table3.csv", meta,
                  {"row", "u", "beta", "xi", "r", "mu_gamma", "mean", "mean_se", "std",
                   "reference_mean", "reference_std"});
    json out = json::array();
    std::uint64_t stream_base = 0;
    for (const Row& row : rows) {
        SdeParams params = derive_sde_params(mu, row.beta, UniformMixtureU{row.r, row.xi},
                                             row.mu_gamma / mu, TruncParetoV{row.u, rho, cap},
                                             VarianceConvention::table_matched);
        SdeStudyRow st = sde_stationary_study(params, 0.0, 0.0, horizon, dt, burn_in,
                                              cfg.replications, cfg.seed, stream_base, cfg.threads);
        stream_base += 1u << 16;
        csv.row(std::string(row.label), row.u, row.beta, row.xi, row.r, row.mu_gamma, st.mean,
                st.mean_se, st.stddev, row.ref_mean, row.ref_std);
        out.push_back(json{{"row", row.label},
                           {"mean", st.mean},
                           {"mean_se", st.mean_se},
                           {"std", st.stddev},
                           {"reference_mean", row.ref_mean},
                           {"reference_std", row.ref_std}});
    }
    return json{{"rows", out}};
}

json run_table4(const ExperimentConfig& cfg, const json& p, const std::string& meta) {
    struct Row {
        int label;
        double u, xi, r, mu, beta, mu_gamma, ref_mean, ref_sigma1;
    };
    const Row all_rows[] = {
        {1, 2.8, 0.08, 0.25, 12, 0.25, 9, 0.1704, 0.0822},
        {2, 2.8, 0.4, 0.25, 12, 0.25, 9, 0.7934, 0.4074},
        {3, 2.8, 0.8, 0.25, 12, 0.25, 9, 1.5862, 0.8169},
        {4, 2.3, 0.08, 0.25, 12, 0.25, 9, 0.1812, 0.0885},
        {5, 2.3, 0.08, 0.5, 6, 0.25, 3, 0.1696, 0.0848},
        {6, 2.3, 0.08, 0.75, 4, 0.25, 1, 0.1559, 0.0812},
    };
    const double rho = p.at("rho");
    const double cap = p.at("v_c");
    const double horizon = p.at("horizon");
    const double dt = p.at("dt");
    const double burn_in = p.at("burn_in");
    std::vector<int> selected = p.at("rows");

    CsvWriter csv(cfg.out_dir / "table4.csv", meta,
                  {"row", "u", "xi", "r", "mu", "beta", "mu_gamma", "mean", "mean_se", "sigma1",
                   "sigma1_se", "ratio", "reference_mean", "reference_sigma1"});
    json out = json::array();
    std::uint64_t stream_base = 0;
    for (const Row& row : all_rows) {
        if (std::find(selected.begin(), selected.end(), row.label) == selected.end()) continue;
        SdeParams params = derive_sde_params(row.mu, row.beta, UniformMixtureU{row.r, row.xi},
                                             row.mu_gamma / row.mu, TruncParetoV{row.u, rho, cap},
                                             VarianceConvention::table_matched);
        SdeStudyRow st = sde_stationary_study(params, 0.0, 0.0, horizon, dt, burn_in,
                                              cfg.replications, cfg.seed, stream_base, cfg.threads);
        stream_base += 1u << 16;
        csv.row(static_cast<std::int64_t>(row.label), row.u, row.xi, row.r, row.mu, row.beta,
                row.mu_gamma, st.mean, st.mean_se, st.sigma1_hat, st.sigma1_se, st.ratio,
                row.ref_mean, row.ref_sigma1);
        out.push_back(json{{"row", row.label},
                           {"mean", st.mean},
                           {"mean_se", st.mean_se},
                           {"sigma1", st.sigma1_hat},
                           {"sigma1_se", st.sigma1_se},
                           {"ratio", st.ratio},
                           {"reference_mean", row.ref_mean},
                           {"reference_sigma1", row.ref_sigma1}});
    }
    return json{{"rows", out}};
}

// ---------------------------------------------------------------------------
// tail (stationary spread survival vs exponential fit)

json run_tail(const ExperimentConfig& cfg, const json& p, const std::string& meta) {
    SdeParams params = derive_sde_params(
        p.at("mu"), p.at("beta"), UniformMixtureU{p.at("r"), p.at("xi_u")},
        static_cast<double>(p.at("mu_gamma")) / static_cast<double>(p.at("mu")),
        TruncParetoV{p.at("v_u"), p.at("rho"), p.at("v_c")}, VarianceConvention::table_matched);

    std::vector<double> pooled;
    sde_stationary_study(params, 0.0, 0.0, p.at("horizon"), p.at("dt"), p.at("burn_in"),
                         cfg.replications, cfg.seed, 0, cfg.threads, &pooled);

    ExponentialFit fit = ks_exponential_fit(pooled);
    std::sort(pooled.begin(), pooled.end());

    // Survival curve on a quantile grid and residuals against the
    // exponential fit in the upper tail.
    CsvWriter csv(cfg.out_dir / "spread_tail.csv", meta,
                  {"quantile", "x", "log_survival_empirical", "log_survival_exponential_fit",
                   "residual"});
    const double n = static_cast<double>(pooled.size());
    int positive = 0, counted = 0;
    double mean_resid = 0.0;
    for (int qi = 50; qi <= 995; qi += 5) {
        double q = static_cast<double>(qi) / 1000.0;
        std::size_t idx = static_cast<std::size_t>(q * n);
        if (idx >= pooled.size()) idx = pooled.size() - 1;
        double x = pooled[idx];
        double s_emp = 1.0 - static_cast<double>(idx + 1) / (n + 1.0);
        double log_emp = std::log(s_emp);
        double log_fit = -fit.rate * x;
        double resid = log_emp - log_fit;
        csv.row(q, x, log_emp, log_fit, resid);
        if (q >= 0.90) {
            ++counted;
            if (resid > 0.0) ++positive;
            mean_resid += resid;
        }
    }
    mean_resid /= std::max(1, counted);
    const double positive_frac = static_cast<double>(positive) / std::max(1, counted);
    return json{{"exponential_rate", fit.rate},
                {"exponential_ks", fit.ks},
                {"exponential_ks_pvalue", fit.p_value},
                {"tail_points", counted},
                {"tail_residual_positive_fraction", positive_frac},
                {"tail_mean_residual", mean_resid},
                {"sub_exponential_tail", positive_frac >= 0.9 && mean_resid > 0.0}};
}

// ---------------------------------------------------------------------------
// clustering (windowed volatility autocorrelation vs permutation null)

json run_clustering(const ExperimentConfig& cfg, const json& p, const std::string& meta) {
    const double mu = p.at("mu");
    const double mu_gamma = p.at("mu_gamma");
    SdeParams jumpy = derive_sde_params(mu, p.at("beta"), UniformMixtureU{p.at("r"), p.at("xi_u")},
                                        mu_gamma / mu, TruncParetoV{p.at("v_u"), p.at("rho"), p.at("v_c")},
                                        VarianceConvention::table_matched);
    SdeParams quiet = jumpy;
    quiet.jump_intensity = 0.0;

    const double horizon = p.at("horizon");
    const double dt = p.at("dt");
    const int shuffles = p.at("shuffles");

    auto run_one = [&](const SdeParams& params, std::uint64_t stream) {
        RngStream rng(cfg.seed, stream);
        SdePath path = simulate_sde(0.0, 0.0, params, horizon, dt, rng, 0.1);
        return vol_series(path.m);
    };

    std::vector<double> vol_jumpy = run_one(jumpy, 0);
    std::vector<double> vol_quiet = run_one(quiet, 1);

    RngStream perm_rng(cfg.seed, 2);
    ClusteringTest test_jumpy = clustering_permutation_test(vol_jumpy, shuffles, perm_rng);
    ClusteringTest test_quiet = clustering_permutation_test(vol_quiet, shuffles, perm_rng);

    // Figure-style series: observed windowed volatility and one shuffle.
    std::vector<double> shuffled(vol_jumpy);
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
        std::size_t j = static_cast<std::size_t>(perm_rng.uniform() * static_cast<double>(i + 1));
        if (j > i) j = i;
        std::swap(shuffled[i], shuffled[j]);
    }
    CsvWriter csv(cfg.out_dir / "vol_series.csv", meta,
                  {"window", "sigma_bar", "sigma_bar_shuffled"});
    for (std::size_t w = 0; w < vol_jumpy.size(); ++w)
        csv.row(static_cast<std::int64_t>(w), vol_jumpy[w], shuffled[w]);

    return json{{"windows", vol_jumpy.size()},
                {"jump", json{{"lag1_autocorr", test_jumpy.observed},
                              {"null_q95", test_jumpy.null_q95},
                              {"p_value", test_jumpy.p_value},
                              {"rejects", test_jumpy.rejects}}},
                {"no_jump", json{{"lag1_autocorr", test_quiet.observed},
                                 {"null_q95", test_quiet.null_q95},
                                 {"p_value", test_quiet.p_value},
                                 {"rejects", test_quiet.rejects}}}};
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "table3", "table4", "tail", "clustering", "averaging", "convergence", "theta-roundtrip"};
    return names;
}

json run_experiment(const ExperimentConfig& cfg) {
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), cfg.name) == names.end())
        throw config_error("unknown experiment '" + cfg.name + "'");

    json params = cfg.params.is_null() ? json::object() : cfg.params;
    if (!params.is_object()) throw config_error("config must be a JSON object");

    std::int64_t reps = cfg.replications;
    json resolved;

    // Per-experiment schemas and defaults.
    if (cfg.name == "theta-roundtrip") {
        check_keys(params, {"pmf_count", "lambdas", "c_ps", "max_support"}, cfg.name);
        resolved = merged_defaults(params, json{{"pmf_count", 100},
                                                {"lambdas", {0.1, 1.0, 10.0}},
                                                {"c_ps", {0.5, 1.0, 2.0}},
                                                {"max_support", 40}});
        if (reps == 0) reps = 1;
    } else if (cfg.name == "averaging") {
        check_keys(params,
                   {"xis", "trades_per_xi", "lambda", "mu", "c_p", "placement_u",
                    "placement_width"},
                   cfg.name);
        resolved = merged_defaults(params, json{{"xis", {10.0, 100.0, 1000.0}},
                                                {"trades_per_xi", 10000},
                                                {"lambda", 1.0},
                                                {"mu", 1.0},
                                                {"c_p", 1.0},
                                                {"placement_u", 2.0},
                                                {"placement_width", 32}});
        if (reps == 0) reps = 1;
    } else if (cfg.name == "convergence") {
        check_keys(params,
                   {"ns", "delta_mode", "gamma", "mu", "beta", "r", "xi_u", "v_u", "v_rho", "v_c",
                    "s0", "m0", "horizon"},
                   cfg.name);
        resolved = merged_defaults(params, json{{"ns", {100, 1000, 10000}},
                                                {"delta_mode", "fine"},
                                                {"gamma", 0.5},
                                                {"mu", 1.0},
                                                {"beta", 0.25},
                                                {"r", 0.25},
                                                {"xi_u", 1.0},
                                                {"v_u", 2.5},
                                                {"v_rho", 0.1},
                                                {"v_c", 1.0},
                                                {"s0", 1.0},
                                                {"m0", 0.0},
                                                {"horizon", 1.0}});
        if (reps == 0) reps = 10000;
    } else if (cfg.name == "table3") {
        check_keys(params, {"mu", "rho", "v_c", "horizon", "dt", "burn_in"}, cfg.name);
        resolved = merged_defaults(params, json{{"mu", 9.0},
                                                {"rho", 0.02},
                                                {"v_c", 1.0},
                                                {"horizon", 5000.0},
                                                {"dt", 1e-3},
                                                {"burn_in", 0.2}});
        if (reps == 0) reps = 8;
    } else if (cfg.name == "table4") {
        check_keys(params, {"rho", "v_c", "horizon", "dt", "burn_in", "rows"}, cfg.name);
        resolved = merged_defaults(params, json{{"rho", 0.02},
                                                {"v_c", 1.0},
                                                {"horizon", 10000.0},
                                                {"dt", 1e-3},
                                                {"burn_in", 0.2},
                                                {"rows", {1, 2, 3, 4, 5, 6}}});
        if (reps == 0) reps = 20;
    } else if (cfg.name == "tail") {
        check_keys(params,
                   {"mu", "beta", "r", "xi_u", "v_u", "rho", "v_c", "mu_gamma", "horizon", "dt",
                    "burn_in"},
                   cfg.name);
        resolved = merged_defaults(params, json{{"mu", 9.0},
                                                {"beta", 0.25},
                                                {"r", 0.25},
                                                {"xi_u", 0.02},
                                                {"v_u", 2.3},
                                                {"rho", 0.02},
                                                {"v_c", 1.0},
                                                {"mu_gamma", 6.75},
                                                {"horizon", 10000.0},
                                                {"dt", 1e-3},
                                                {"burn_in", 0.2}});
        if (reps == 0) reps = 4;
    } else if (cfg.name == "clustering") {
        check_keys(params,
                   {"mu", "beta", "r", "xi_u", "v_u", "rho", "v_c", "mu_gamma", "horizon", "dt",
                    "shuffles"},
                   cfg.name);
        resolved = merged_defaults(params, json{{"mu", 9.0},
                                                {"beta", 0.25},
                                                {"r", 0.25},
                                                {"xi_u", 0.02},
                                                {"v_u", 2.3},
                                                {"rho", 0.02},
                                                {"v_c", 1.0},
                                                {"mu_gamma", 6.75},
                                                {"horizon", 10000.0},
                                                {"dt", 1e-3},
                                                {"shuffles", 200}});
        if (reps == 0) reps = 1;
    }

    ExperimentConfig run_cfg = cfg;
    run_cfg.params = resolved;
    run_cfg.replications = reps;

    fs::create_directories(cfg.out_dir);
    json full_config{{"experiment", cfg.name},
                     {"params", resolved},
                     {"seed", cfg.seed},
                     {"replications", reps},
                     {"version", std::string(kVersion)}};
    write_json_file(cfg.out_dir / "resolved_config.json", full_config);
    const std::string meta = provenance_meta(full_config, cfg.seed);

    json summary;
    if (cfg.name == "theta-roundtrip")
        summary = run_theta_roundtrip(run_cfg, resolved, meta);
    else if (cfg.name == "averaging")
        summary = run_averaging(run_cfg, resolved, meta);
    else if (cfg.name == "convergence")
        summary = run_convergence(run_cfg, resolved, meta);
    else if (cfg.name == "table3")
        summary = run_table3(run_cfg, resolved, meta);
    else if (cfg.name == "table4")
        summary = run_table4(run_cfg, resolved, meta);
    else if (cfg.name == "tail")
        summary = run_tail(run_cfg, resolved, meta);
    else if (cfg.name == "clustering")
        summary = run_clustering(run_cfg, resolved, meta);

    json full_summary{{"experiment", cfg.name},
                      {"config_hash", provenance_meta(full_config, cfg.seed)},
                      {"results", summary}};
    write_json_file(cfg.out_dir / "summary.json", full_summary);
    return full_summary;
}

}  // namespace lobscale
