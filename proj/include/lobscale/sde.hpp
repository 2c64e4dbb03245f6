#pragma once

#include <cstdint>
#include <vector>

#include "lobscale/common.hpp"
#include "lobscale/rng.hpp"

namespace lobscale {

/// U-law: U = 0 with probability 1-r, else Uniform(0, xi].
struct UniformMixtureU {
    double r = 0.25;
    double xi = 0.02;

    bool valid() const { return r > 0.0 && r <= 1.0 && xi > 0.0; }
    double mean() const { return r * xi / 2.0; }
    double second_moment() const { return r * xi * xi / 3.0; }
    double sample(RngStream& rng) const;
};

/// V-law: two-sided truncated Pareto density with tail index u in (1, 3],
/// offset rho > 0 and positive-side cap c > 0; each branch carries mass 1/2
/// and the negative branch is supported on (-1, 0), so V >= -1 always.
struct TruncParetoV {
    double u = 2.8;
    double rho = 0.02;
    double c = 1.0;

    bool valid() const { return u > 1.0 && u <= 3.0 && rho > 0.0 && c > 0.0; }
    void validate() const;
    double cdf(double x) const;
    double quantile(double w) const;  // w in (0,1)
    double sample(RngStream& rng) const;
    double mean() const;
    double second_moment() const;
};

/// Convention for mapping the per-trade law onto the diffusion coefficients.
/// theorem_stated takes the stated constants eta = 2 mu beta E[U] and
/// sigma^2 = mu E[U^2]; table_matched reproduces the simulation-study
/// heuristics sigma1 = xi sqrt(r mu / 3) and E[s(inf)] = xi r mu / (6 beta),
/// i.e. sigma^2 = mu E[U^2]/2 and eta = beta xi.
enum class VarianceConvention { theorem_stated, table_matched };

struct SdeParams {
    double eta = 0.0;             // spread drift
    double sigma2 = 0.0;          // variance rate of EACH Brownian motion
    double jump_intensity = 0.0;  // per compound-Poisson channel
    TruncParetoV v_law{};

    double sigma2_total() const { return 2.0 * sigma2; }
    bool valid() const {
        return eta >= 0.0 && sigma2 >= 0.0 && jump_intensity >= 0.0 &&
               (jump_intensity == 0.0 || v_law.valid());
    }
};

SdeParams derive_sde_params(double mu, double beta, const UniformMixtureU& u_law, double gamma,
                            const TruncParetoV& v_law,
                            VarianceConvention convention = VarianceConvention::table_matched);

/// Reflected jump-diffusion path sampled at sample_dt; diffusion advanced by
/// Euler steps of at most dt with exact splits at jump and sample times.
struct SdePath {
    double sample_dt = 0.1;
    std::vector<double> t;  // sample times (including t = 0)
    std::vector<double> s;
    std::vector<double> m;
    std::vector<double> L;  // cumulative reflection

    struct JumpEvent {
        double t;
        int channel;     // 1 or 2
        double size;     // V draw
        double s_before;
    };
    std::vector<JumpEvent> jumps;
};

SdePath simulate_sde(double s0, double m0, const SdeParams& params, double horizon, double dt,
                     RngStream& rng, double sample_dt = 0.1);

/// Endpoint values s(horizon), m(horizon) only; cheap path for marginal
/// studies with many replications.
struct SdeEndpoints {
    std::vector<double> s;
    std::vector<double> m;
};
SdeEndpoints sde_endpoints(double s0, double m0, const SdeParams& params, double horizon,
                           double dt, std::uint64_t seed, std::uint64_t stream_base,
                           std::int64_t replications, int threads);

}  // namespace lobscale
