#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cocrash/cojump.hpp"
#include "cocrash/config.hpp"
#include "cocrash/market_data.hpp"
#include "cocrash/time_grid.hpp"

namespace cocrash {

enum class Regime { fragile, systemic };

struct PlannedEvent {
    Minutes timestamp = 0;
    std::size_t size = 0;
    Regime regime = Regime::fragile;
};

// Two-population synthetic market: Gaussian diffusion with a smooth intraweek
// volatility shape, planted co-jumps whose members come from the fragile set
// below the threshold size and from the systemic set at or above it, and
// dollar volumes that put the systemic set on top.
struct SimulationPlan {
    std::size_t n_assets = 300;
    int n_weeks = 10;
    double base_vol = 5e-4;
    std::int64_t start_day = 0;  // must be a Monday
    int session_open = 570;      // 09:30
    int session_close = 960;     // 16:00
    std::vector<std::int64_t> holidays;

    double periodicity_open_mult = 1.0;   // volatility multiplier at the open
    double periodicity_close_mult = 1.0;  // and at the close, decaying inward

    std::size_t systemic_count = 0;  // assets [0, systemic_count)
    std::size_t fragile_count = 0;   // assets [systemic_count, systemic_count + fragile_count)

    double jump_magnitude = 15.0;  // in units of the local diffusive sigma
    int jump_direction = -1;       // -1 down, +1 up, 0 per-member random
    double member_weight_decay = 0.93;  // geometric within-set draw weights
    // Fragile assets draw their DTV rungs from the top fraction of the
    // non-systemic ladder; 1.0 spreads them over the whole range, smaller
    // values keep them away from the illiquid bottom.
    double fragile_dtv_band = 1.0;

    // Auto schedule: auto_events_per_size events at every size in
    // [auto_min_size, auto_max_size]; sizes below auto_threshold use the
    // fragile set. Explicit events are appended.
    std::size_t auto_events_per_size = 0;
    std::size_t auto_min_size = 1;
    std::size_t auto_max_size = 0;
    std::size_t auto_threshold = 5;
    std::vector<PlannedEvent> explicit_events;

    std::uint64_t seed = 0;

    static SimulationPlan from_config(const KeyValueConfig& cfg);
    SessionCalendar calendar() const;
    std::string asset_name(std::size_t index) const;
};

struct GroundTruth {
    std::vector<CoCrashEvent> events;  // merged by minute, members sorted
    std::vector<std::vector<Minutes>> jumps_by_asset;  // planted minutes per asset
};

struct SimulationResult {
    PricePanel panel;
    GroundTruth truth;
};

// Baseline noise is generated from per-asset substreams, so the result is
// identical for any thread count.
SimulationResult simulate(const SimulationPlan& plan, int threads = 0);

struct Score {
    std::optional<double> precision;
    std::optional<double> recall;
    std::vector<std::pair<std::size_t, std::size_t>> size_confusion;  // planted -> detected
};

// Exact event matching: same timestamp and identical member sets. Same
// timestamp with different members is a near-miss recorded in the confusion
// list.
Score score(const std::vector<CoCrashEvent>& detected, const GroundTruth& truth);

void write_ground_truth(const GroundTruth& truth, const std::string& path,
                        const std::string& meta_comment);

}  // namespace cocrash
