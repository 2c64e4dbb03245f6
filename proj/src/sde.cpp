#include "lobscale/sde.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <thread>

namespace lobscale {

double UniformMixtureU::sample(RngStream& rng) const {
    if (!rng.bernoulli(r)) return 0.0;
    return xi * rng.uniform_pos();
}

void TruncParetoV::validate() const {
    if (!(u > 1.0 && u <= 3.0)) throw config_error("TruncParetoV: u must lie in (1, 3]");
    if (!(rho > 0.0)) throw config_error("TruncParetoV: rho must be > 0");
    if (!(c > 0.0)) throw config_error("TruncParetoV: c must be > 0");
}

namespace {
// Each branch is a truncated Pareto with exact primitive
// d/dx [-(rho +- x)^(1-u) / (1-u)] = (rho +- x)^-u.
inline double pos_norm(double u, double rho, double c) {
    return std::pow(rho, 1.0 - u) - std::pow(c + rho, 1.0 - u);
}
inline double neg_norm(double u, double rho) {
    return std::pow(rho, 1.0 - u) - std::pow(1.0 + rho, 1.0 - u);
}
}  // namespace

double TruncParetoV::cdf(double x) const {
    if (x <= -1.0) return 0.0;
    if (x >= c) return 1.0;
    if (x < 0.0) {
        // integral of the negative branch from -1 to x, branch mass 1/2
        double num = std::pow(rho - x, 1.0 - u) - std::pow(1.0 + rho, 1.0 - u);
        return 0.5 * num / neg_norm(u, rho);
    }
    double num = std::pow(rho, 1.0 - u) - std::pow(rho + x, 1.0 - u);
    return 0.5 + 0.5 * num / pos_norm(u, rho, c);
}

double TruncParetoV::quantile(double w) const {
    if (!(w > 0.0 && w < 1.0)) throw config_error("TruncParetoV::quantile: w must be in (0,1)");
    if (w < 0.5) {
        double num = 2.0 * w * neg_norm(u, rho) + std::pow(1.0 + rho, 1.0 - u);
        return rho - std::pow(num, 1.0 / (1.0 - u));
    }
    double num = std::pow(rho, 1.0 - u) - 2.0 * (w - 0.5) * pos_norm(u, rho, c);
    return std::pow(num, 1.0 / (1.0 - u)) - rho;
}

double TruncParetoV::sample(RngStream& rng) const {
    // branch coin + inverse transform within the branch
    bool positive = rng.bernoulli(0.5);
    double w = rng.uniform_pos();
    if (positive) {
        double num = std::pow(rho, 1.0 - u) - w * pos_norm(u, rho, c);
        return std::pow(num, 1.0 / (1.0 - u)) - rho;
    }
    double num = std::pow(1.0 + rho, 1.0 - u) + w * neg_norm(u, rho);
    return rho - std::pow(num, 1.0 / (1.0 - u));
}

double TruncParetoV::mean() const {
    // branch moments from the exact primitives of x (rho +- x)^-u
    auto branch_mean_pos = [&](double cap) {
        double i0 = (std::pow(rho, 1.0 - u) - std::pow(cap + rho, 1.0 - u)) / (u - 1.0);
        double i1 = (std::pow(rho, 2.0 - u) - std::pow(cap + rho, 2.0 - u)) / (u - 2.0);
        if (u == 2.0) i1 = std::log((cap + rho) / rho);
        // integral of x (rho+x)^-u = i1 - rho i0
        return (i1 - rho * i0) / i0;
    };
    double mp = branch_mean_pos(c);
    double mn = -branch_mean_pos(1.0);
    return 0.5 * (mp + mn);
}

double TruncParetoV::second_moment() const {
    auto branch_m2_pos = [&](double cap) {
        double i0 = (std::pow(rho, 1.0 - u) - std::pow(cap + rho, 1.0 - u)) / (u - 1.0);
        double i1 = (std::pow(rho, 2.0 - u) - std::pow(cap + rho, 2.0 - u)) / (u - 2.0);
        if (u == 2.0) i1 = std::log((cap + rho) / rho);
        double i2 = (std::pow(rho, 3.0 - u) - std::pow(cap + rho, 3.0 - u)) / (u - 3.0);
        if (u == 3.0) i2 = std::log((cap + rho) / rho);
        // integral of x^2 (rho+x)^-u = i2 - 2 rho i1 + rho^2 i0
        return (i2 - 2.0 * rho * i1 + rho * rho * i0) / i0;
    };
    return 0.5 * (branch_m2_pos(c) + branch_m2_pos(1.0));
}

SdeParams derive_sde_params(double mu, double beta, const UniformMixtureU& u_law, double gamma,
                            const TruncParetoV& v_law, VarianceConvention convention) {
    if (!(mu > 0.0 && beta > 0.0 && gamma >= 0.0) || !u_law.valid())
        throw config_error("derive_sde_params: invalid inputs");
    if (gamma > 0.0) v_law.validate();
    SdeParams p;
    if (convention == VarianceConvention::theorem_stated) {
        p.eta = 2.0 * mu * beta * u_law.mean();
        p.sigma2 = mu * u_law.second_moment();
    } else {
        p.eta = beta * u_law.xi;
        p.sigma2 = 0.5 * mu * u_law.second_moment();
    }
    p.jump_intensity = gamma * mu;
    p.v_law = v_law;
    return p;
}

namespace {

// Pre-drawn standard normals consumed two per diffusion step; refills keep
// the draw order identical to calling rng.normal() step by step.
class NormalBuffer {
public:
    explicit NormalBuffer(RngStream& rng) : rng_(rng) {}
    double next() {
        if (pos_ == buf_.size()) {
            buf_.resize(4096);
            rng_.fill_normal(buf_);
            pos_ = 0;
        }
        return buf_[pos_++];
    }

private:
    RngStream& rng_;
    std::vector<double> buf_;
    std::size_t pos_ = 0;
};

struct JumpTime {
    double t;
    int channel;
};

std::vector<JumpTime> draw_jump_times(const SdeParams& params, double horizon, RngStream& rng) {
    std::vector<JumpTime> jumps;
    if (params.jump_intensity > 0.0) {
        for (int channel : {1, 2}) {
            double t = 0.0;
            for (;;) {
                t += rng.exponential(params.jump_intensity);
                if (t > horizon) break;
                jumps.push_back({t, channel});
            }
        }
        std::stable_sort(jumps.begin(), jumps.end(),
                         [](const JumpTime& a, const JumpTime& b) { return a.t < b.t; });
    }
    return jumps;
}

}  // namespace

SdePath simulate_sde(double s0, double m0, const SdeParams& params, double horizon, double dt,
                     RngStream& rng, double sample_dt) {
    if (!params.valid()) throw config_error("simulate_sde: invalid parameters");
    if (!(s0 >= 0.0)) throw config_error("simulate_sde: s0 must be >= 0");
    if (!(dt > 0.0 && horizon > 0.0 && sample_dt > 0.0))
        throw config_error("simulate_sde: dt, horizon, sample_dt must be > 0");

    SdePath path;
    path.sample_dt = sample_dt;
    const std::size_t n_samples = static_cast<std::size_t>(std::floor(horizon / sample_dt + 1e-9));
    path.t.reserve(n_samples + 1);
    path.s.reserve(n_samples + 1);
    path.m.reserve(n_samples + 1);
    path.L.reserve(n_samples + 1);

    std::vector<JumpTime> jumps = draw_jump_times(params, horizon, rng);
    std::size_t jump_idx = 0;

    const double sd = std::sqrt(params.sigma2);
    NormalBuffer normals(rng);

    double t = 0.0, s = s0, m = m0, L = 0.0;
    path.t.push_back(0.0);
    path.s.push_back(s);
    path.m.push_back(m);
    path.L.push_back(L);

    std::size_t next_sample = 1;
    while (t < horizon - 1e-12) {
        double t_sample = static_cast<double>(next_sample) * sample_dt;
        double t_jump = (jump_idx < jumps.size()) ? jumps[jump_idx].t : horizon + 1.0;
        double t_stop = std::min({t + dt, t_sample, t_jump, horizon});
        double h = t_stop - t;

        if (h > 0.0) {
            double sh = sd * std::sqrt(h);
            double dwa = sh * normals.next();
            double dwb = sh * normals.next();
            double s_free = s - params.eta * h + dwa + dwb;
            if (s_free < 0.0) {
                L += -s_free;
                s_free = 0.0;
            }
            s = s_free;
            m += dwa - dwb;
            t = t_stop;
        }

        if (jump_idx < jumps.size() && t >= jumps[jump_idx].t - 1e-15) {
            const auto& j = jumps[jump_idx];
            double v = params.v_law.sample(rng);
            double s_before = s;
            s = s * (1.0 + v / 2.0);
            m += (j.channel == 1 ? 1.0 : -1.0) * s_before * v / 2.0;
            path.jumps.push_back({j.t, j.channel, v, s_before});
            ++jump_idx;
        }
        if (t >= t_sample - 1e-15 && next_sample <= n_samples) {
            path.t.push_back(t_sample);
            path.s.push_back(s);
            path.m.push_back(m);
            path.L.push_back(L);
            ++next_sample;
        }
    }
    return path;
}

SdeEndpoints sde_endpoints(double s0, double m0, const SdeParams& params, double horizon,
                           double dt, std::uint64_t seed, std::uint64_t stream_base,
                           std::int64_t replications, int threads) {
    SdeEndpoints out;
    out.s.resize(static_cast<std::size_t>(replications));
    out.m.resize(static_cast<std::size_t>(replications));
    auto work = [&](std::int64_t rep) {
        RngStream rng(seed, stream_base + static_cast<std::uint64_t>(rep));
        SdePath p = simulate_sde(s0, m0, params, horizon, dt, rng, horizon);
        out.s[static_cast<std::size_t>(rep)] = p.s.back();
        out.m[static_cast<std::size_t>(rep)] = p.m.back();
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

}  // namespace lobscale
