#include "lobscale/micro_sim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace lobscale {

std::int64_t BookState::total_orders() const {
    std::int64_t n = 0;
    for (const auto& [tick, c] : asks) n += c;
    for (const auto& [tick, c] : bids) n += c;
    return n;
}

bool BookState::overlapped() const {
    for (const auto& [tick, c] : asks)
        if (bids.count(tick)) return true;
    return false;
}

MicroSimulator::MicroSimulator(MicroParams params, RngStream rng)
    : params_(std::move(params)), rng_(rng) {
    if (!params_.valid()) throw config_error("MicroSimulator: invalid parameters");

    // Seed the book: q orders per side placed against the configured quote,
    // then freeze at the realized best so the per-trade process starts on the
    // actual quotes.
    Quote init{params_.init_ask_ticks, params_.init_bid_ticks};
    frozen_ = init;
    cached_ = &curves_for_spread(init.spread_ticks());
    for (std::int32_t k = 0; k < params_.init_orders_per_side; ++k) {
        std::int64_t ia = sample_placement_class();
        std::int64_t ib = sample_placement_class();
        book_.asks[relative_to_absolute_ticks(ia, Side::ask, init)] += 1;
        book_.bids[relative_to_absolute_ticks(ib, Side::bid, init)] += 1;
    }
    Quote realized{book_.best_ask().value(), book_.best_bid().value()};
    refreeze(realized);
}

const MicroSimulator::CachedCurves& MicroSimulator::curves_for_spread(std::int64_t spread_ticks) {
    auto it = cache_.find(spread_ticks);
    if (it == cache_.end()) {
        CachedCurves c;
        c.pmf = params_.placement(spread_ticks);
        c.alpha = cancellation_from_placement(c.pmf, params_.lambda, params_.c_p);
        c.placement_cdf.resize(c.pmf.size());
        double acc = 0.0;
        for (std::size_t j = 0; j < c.pmf.size(); ++j) {
            acc += c.pmf.masses()[j];
            c.placement_cdf[j] = acc;
        }
        c.placement_cdf.back() = 1.0;
        it = cache_.emplace(spread_ticks, std::move(c)).first;
    }
    return it->second;
}

void MicroSimulator::refreeze(const Quote& q) {
    frozen_ = q;
    cached_ = &curves_for_spread(q.spread_ticks());
    cancel_rate_[0] = recompute_cancel_rate(Side::ask);
    cancel_rate_[1] = recompute_cancel_rate(Side::bid);
}

double MicroSimulator::recompute_cancel_rate(Side side) const {
    const auto& levels = (side == Side::ask) ? book_.asks : book_.bids;
    double total = 0.0;
    for (const auto& [tick, count] : levels) {
        std::int64_t rel = (side == Side::ask) ? tick - frozen_.ask_ticks : frozen_.bid_ticks - tick;
        total += static_cast<double>(count) * cached_->alpha.at_clamped(rel);
    }
    return params_.xi * total;
}

void MicroSimulator::insert_order(Side side, std::int64_t tick) {
    auto& levels = (side == Side::ask) ? book_.asks : book_.bids;
    levels[tick] += 1;
    std::int64_t rel = (side == Side::ask) ? tick - frozen_.ask_ticks : frozen_.bid_ticks - tick;
    if (rel < cached_->alpha.lo || rel > cached_->alpha.hi()) ++counters_.clamped_class_orders;
    cancel_rate_[side == Side::ask ? 0 : 1] += params_.xi * cached_->alpha.at_clamped(rel);
}

void MicroSimulator::remove_order(Side side, std::int64_t tick) {
    auto& levels = (side == Side::ask) ? book_.asks : book_.bids;
    auto it = levels.find(tick);
    assert(it != levels.end() && it->second > 0);
    it->second -= 1;
    if (it->second == 0) levels.erase(it);
    std::int64_t rel = (side == Side::ask) ? tick - frozen_.ask_ticks : frozen_.bid_ticks - tick;
    cancel_rate_[side == Side::ask ? 0 : 1] -= params_.xi * cached_->alpha.at_clamped(rel);
}

std::int64_t MicroSimulator::sample_placement_class() {
    const auto& cdf = cached_->placement_cdf;
    double u = rng_.uniform();
    auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    std::size_t j = static_cast<std::size_t>(it - cdf.begin());
    if (j >= cdf.size()) j = cdf.size() - 1;
    return cached_->pmf.lo() + static_cast<std::int64_t>(j);
}

std::int64_t MicroSimulator::sample_cancel_tick(Side side) {
    const auto& levels = (side == Side::ask) ? book_.asks : book_.bids;
    double target = rng_.uniform() * cancel_rate_[side == Side::ask ? 0 : 1] / params_.xi;
    double acc = 0.0;
    for (const auto& [tick, count] : levels) {
        std::int64_t rel = (side == Side::ask) ? tick - frozen_.ask_ticks : frozen_.bid_ticks - tick;
        acc += static_cast<double>(count) * cached_->alpha.at_clamped(rel);
        if (target <= acc) return tick;
    }
    // Float slack at the very top of the accumulated range: cancel the last
    // level with positive rate.
    for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
        std::int64_t rel = (side == Side::ask) ? it->first - frozen_.ask_ticks
                                               : frozen_.bid_ticks - it->first;
        if (cached_->alpha.at_clamped(rel) > 0.0) return it->first;
    }
    return levels.empty() ? 0 : levels.begin()->first;
}

Quote MicroSimulator::current_quote_with_fallback() {
    Quote q = frozen_;
    if (auto a = book_.best_ask())
        q.ask_ticks = *a;
    else
        ++counters_.empty_side_quote_fallbacks;
    if (auto b = book_.best_bid())
        q.bid_ticks = *b;
    else
        ++counters_.empty_side_quote_fallbacks;
    return q;
}

std::optional<TradeRecord> MicroSimulator::execute_market(Side side) {
    auto best = (side == Side::ask) ? book_.best_ask() : book_.best_bid();
    if (!best) {
        if (params_.empty_side == EmptySidePolicy::discard) {
            ++counters_.discarded_market_orders;
            return std::nullopt;
        }
        std::int64_t i = sample_placement_class();
        std::int64_t tick = relative_to_absolute_ticks(i, side, frozen_);
        insert_order(side, tick);
        best = (side == Side::ask) ? book_.best_ask() : book_.best_bid();
    }

    if (pre_trade_hook_) pre_trade_hook_(*this);

    TradeRecord rec;
    rec.t = t_;
    rec.side = side;
    rec.quote_before = current_quote_with_fallback();
    remove_order(side, *best);
    rec.quote_after = current_quote_with_fallback();
    rec.d_ask_ticks = rec.quote_after.ask_ticks - rec.quote_before.ask_ticks;
    rec.d_bid_ticks = rec.quote_after.bid_ticks - rec.quote_before.bid_ticks;
    ++counters_.trades;

    // The per-trade price process records the pre-removal quote; relative
    // classes for the next inter-trade interval are measured against it.
    refreeze(rec.quote_before);
    return rec;
}

std::optional<TradeRecord> MicroSimulator::step() {
    const double r_limit = params_.xi * params_.lambda;
    const double r_market = params_.mu;
    const double total =
        2.0 * r_limit + 2.0 * r_market + cancel_rate_[0] + cancel_rate_[1];
    assert(total > 0.0);

    t_ += rng_.exponential(total);
    ++counters_.events;

    // Periodic from-scratch rate rebuild; tracks incremental drift.
    if (counters_.events % 10000 == 0) {
        for (Side s : {Side::ask, Side::bid}) {
            int idx = (s == Side::ask) ? 0 : 1;
            double fresh = recompute_cancel_rate(s);
            double denom = std::max({std::fabs(fresh), std::fabs(cancel_rate_[idx]), 1e-300});
            counters_.max_cancel_rate_drift =
                std::max(counters_.max_cancel_rate_drift,
                         std::fabs(fresh - cancel_rate_[idx]) / denom);
            cancel_rate_[idx] = fresh;
        }
    }

    double u = rng_.uniform() * total;
    if (u < r_limit) {
        std::int64_t i = sample_placement_class();
        insert_order(Side::bid, relative_to_absolute_ticks(i, Side::bid, frozen_));
        ++counters_.limit_arrivals;
        return std::nullopt;
    }
    u -= r_limit;
    if (u < r_limit) {
        std::int64_t i = sample_placement_class();
        insert_order(Side::ask, relative_to_absolute_ticks(i, Side::ask, frozen_));
        ++counters_.limit_arrivals;
        return std::nullopt;
    }
    u -= r_limit;
    if (u < r_market) return execute_market(Side::ask);  // market buy
    u -= r_market;
    if (u < r_market) return execute_market(Side::bid);  // market sell
    u -= r_market;
    Side side = (u < cancel_rate_[0]) ? Side::ask : Side::bid;
    if (!((side == Side::ask ? book_.asks : book_.bids).empty())) {
        remove_order(side, sample_cancel_tick(side));
        ++counters_.cancellations;
    }
    return std::nullopt;
}

std::int32_t MicroSimulator::class_occupancy(Side side, std::int64_t i) const {
    std::int64_t tick = relative_to_absolute_ticks(i, side, frozen_);
    const auto& levels = (side == Side::ask) ? book_.asks : book_.bids;
    auto it = levels.find(tick);
    return it == levels.end() ? 0 : it->second;
}

TradePath run_for_trades(const MicroParams& params, RngStream rng, std::int64_t n_trades) {
    MicroSimulator sim(params, rng);
    TradePath path;
    path.trades.reserve(static_cast<std::size_t>(n_trades));
    while (static_cast<std::int64_t>(path.trades.size()) < n_trades) {
        if (auto rec = sim.step()) path.trades.push_back(*rec);
    }
    return path;
}

TradePath run_for_time(const MicroParams& params, RngStream rng, double horizon) {
    if (!(horizon >= 0.0)) throw config_error("run_for_time: horizon must be >= 0");
    MicroSimulator sim(params, rng);
    TradePath path;
    while (sim.time() < horizon) {
        if (auto rec = sim.step()) {
            if (rec->t <= horizon) path.trades.push_back(*rec);
        }
    }
    return path;
}

std::vector<OccupancyStats> inter_trade_occupancy_probe(const MicroParams& params, RngStream rng,
                                                        std::int64_t n_snapshots) {
    if (!(params.mu > 0.0)) throw config_error("occupancy probe: mu must be > 0");
    MicroSimulator sim(params, rng);
    const auto& alpha = sim.cancellation_curve();
    const auto& pmf = sim.placement_pmf();
    const std::int64_t lo = alpha.lo;
    const std::int64_t hi = alpha.hi();
    const std::size_t n_classes = static_cast<std::size_t>(hi - lo + 1);

    std::vector<double> sum(n_classes, 0.0), sumsq(n_classes, 0.0);
    std::int64_t taken = 0;
    // Snapshot through the pre-trade hook: the book and the frozen quote
    // still describe the interval being closed, so each class has relaxed
    // toward its stationary infinite-server law since the previous trade.
    sim.set_pre_trade_hook([&](const MicroSimulator& s) {
        if (taken >= n_snapshots) return;
        for (std::int64_t i = lo; i <= hi; ++i) {
            std::size_t j = static_cast<std::size_t>(i - lo);
            double occ_a = s.class_occupancy(Side::ask, i);
            double occ_b = s.class_occupancy(Side::bid, i);
            sum[j] += occ_a + occ_b;
            sumsq[j] += occ_a * occ_a + occ_b * occ_b;
        }
        ++taken;
    });
    while (taken < n_snapshots) sim.step();

    std::vector<OccupancyStats> out;
    const double n = 2.0 * static_cast<double>(taken);  // both sides pooled
    for (std::int64_t i = lo; i <= hi; ++i) {
        std::size_t j = static_cast<std::size_t>(i - lo);
        double a = alpha.at(i);
        if (a <= 0.0) continue;  // terminal tick: no stationary law
        OccupancyStats s;
        s.rel_tick = i;
        s.n_samples = static_cast<std::size_t>(n);
        s.mean = sum[j] / n;
        s.variance = sumsq[j] / n - s.mean * s.mean;
        s.expected_mean = params.lambda * pmf.at(i) / a;
        out.push_back(s);
    }
    return out;
}

}  // namespace lobscale
