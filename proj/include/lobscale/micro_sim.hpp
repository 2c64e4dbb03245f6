#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "lobscale/rng.hpp"
#include "lobscale/theta.hpp"

namespace lobscale {

/// Resting orders per side, keyed by absolute tick. Counts are strictly
/// positive; a tick never carries orders on both sides (placement excludes
/// the far half of the spread, which makes crossing impossible).
struct BookState {
    std::map<std::int64_t, std::int32_t> asks;
    std::map<std::int64_t, std::int32_t> bids;

    std::optional<std::int64_t> best_ask() const {
        if (asks.empty()) return std::nullopt;
        return asks.begin()->first;
    }
    std::optional<std::int64_t> best_bid() const {
        if (bids.empty()) return std::nullopt;
        return bids.rbegin()->first;
    }
    std::int64_t total_orders() const;
    bool overlapped() const;  // true if some tick is occupied on both sides
};

/// What to do when a market order hits an empty side: drop it (keeps the
/// Markov structure, default) or synthesize a resting order from the
/// placement law and trade against it.
enum class EmptySidePolicy { discard, regenerate };

struct MicroParams {
    double lambda = 1.0;   // limit-order rate per side
    double mu = 1.0;       // market-order rate per side
    double xi = 1.0;       // speed multiplier applied to lambda and alpha
    PlacementFamily placement;
    double c_p = 1.0;      // patience ratio driving the cancellation curve
    TickGrid grid{0.01};
    std::int64_t init_ask_ticks = 1000;
    std::int64_t init_bid_ticks = 996;
    std::int32_t init_orders_per_side = 25;
    EmptySidePolicy empty_side = EmptySidePolicy::discard;

    bool valid() const {
        return lambda > 0.0 && mu >= 0.0 && xi >= 1.0 && c_p > 0.0 && grid.valid() &&
               init_ask_ticks >= init_bid_ticks && init_orders_per_side > 0 &&
               static_cast<bool>(placement);
    }
};

/// One executed market order. quote_before is the pre-removal quote (the
/// price the trade occurred at), quote_after the book's best right after the
/// matched order left. The per-trade price process tracks quote_before.
struct TradeRecord {
    double t = 0.0;
    Side side = Side::ask;  // ask = market buy consumed the ask side
    Quote quote_before;
    Quote quote_after;
    std::int64_t d_ask_ticks = 0;  // quote_after - quote_before
    std::int64_t d_bid_ticks = 0;
};

struct SimCounters {
    std::uint64_t events = 0;
    std::uint64_t limit_arrivals = 0;
    std::uint64_t cancellations = 0;
    std::uint64_t trades = 0;
    std::uint64_t discarded_market_orders = 0;
    std::uint64_t empty_side_quote_fallbacks = 0;
    std::uint64_t clamped_class_orders = 0;
    double max_cancel_rate_drift = 0.0;  // incremental vs recomputed total rate
};

/// Event-driven simulation of the two-sided multiclass queue. Placement and
/// cancellation classes are measured against the quote frozen at the last
/// trade; competing exponential clocks pick the next event.
class MicroSimulator {
public:
    MicroSimulator(MicroParams params, RngStream rng);

    /// Advances one event. Returns a record iff the event was an executed
    /// market order.
    std::optional<TradeRecord> step();

    double time() const { return t_; }
    const BookState& book() const { return book_; }
    const Quote& frozen_quote() const { return frozen_; }
    const SimCounters& counters() const { return counters_; }
    const CancellationCurve& cancellation_curve() const { return cached_->alpha; }
    const PlacementPmf& placement_pmf() const { return cached_->pmf; }

    /// Occupancy of the relative class i on a side under the frozen quote.
    std::int32_t class_occupancy(Side side, std::int64_t i) const;

    /// Invoked right before a market order executes, while the book and the
    /// frozen quote still describe the inter-trade interval being closed.
    void set_pre_trade_hook(std::function<void(const MicroSimulator&)> hook) {
        pre_trade_hook_ = std::move(hook);
    }

    /// Total per-side cancellation intensity recomputed from scratch
    /// (xi-scaled); used by the drift check and tests.
    double recompute_cancel_rate(Side side) const;

private:
    struct CachedCurves {
        PlacementPmf pmf;
        CancellationCurve alpha;
        std::vector<double> placement_cdf;
    };

    const CachedCurves& curves_for_spread(std::int64_t spread_ticks);
    void refreeze(const Quote& q);
    void insert_order(Side side, std::int64_t tick);
    void remove_order(Side side, std::int64_t tick);
    std::int64_t sample_placement_class();
    std::int64_t sample_cancel_tick(Side side);
    std::optional<TradeRecord> execute_market(Side side);
    Quote current_quote_with_fallback();

    MicroParams params_;
    RngStream rng_;
    BookState book_;
    Quote frozen_;
    double t_ = 0.0;
    std::map<std::int64_t, CachedCurves> cache_;  // keyed by spread
    const CachedCurves* cached_ = nullptr;
    double cancel_rate_[2] = {0.0, 0.0};  // xi-scaled total per side
    SimCounters counters_;
    std::function<void(const MicroSimulator&)> pre_trade_hook_;
};

struct TradePath {
    std::vector<TradeRecord> trades;
};

/// Runs until n_trades executed market orders (may take arbitrarily many
/// book events in between). Deterministic given (params, rng).
TradePath run_for_trades(const MicroParams& params, RngStream rng, std::int64_t n_trades);

/// Runs until simulated time reaches horizon.
TradePath run_for_time(const MicroParams& params, RngStream rng, double horizon);

struct OccupancyStats {
    std::int64_t rel_tick = 0;
    double mean = 0.0;
    double variance = 0.0;
    double expected_mean = 0.0;  // lambda p(i) / alpha(i), xi-invariant
    std::size_t n_samples = 0;
};

/// Snapshots class occupancies immediately before each trade (both sides
/// pooled; parameters are symmetric) and compares them with the stationary
/// infinite-server law. Classes whose cancellation rate is zero (the terminal
/// support tick) are skipped.
std::vector<OccupancyStats> inter_trade_occupancy_probe(const MicroParams& params, RngStream rng,
                                                        std::int64_t n_snapshots);

}  // namespace lobscale
