#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cocrash/market_data.hpp"
#include "cocrash/time_grid.hpp"

namespace cocrash {

// Multiplicative intraweek volatility pattern, one factor per session minute
// of the week, normalized so the mean squared factor is 1.
struct PeriodicityProfile {
    std::vector<double> bucket_factors;
    int bucket_count = 0;
    int fallback_buckets = 0;  // buckets estimated from < 5 observations

    double factor_for(int bucket) const { return bucket_factors[static_cast<std::size_t>(bucket)]; }
};

struct JumpEvent {
    std::string asset_id;
    Minutes timestamp = 0;
    double statistic = 0.0;  // signed L(i); |L| exceeds the threshold in force
    int direction = 0;       // sign of the deseasonalized (and raw) return
    double raw_return = 0.0;
};

struct DetectorConfig {
    double alpha = 0.05;
    int window_k = 270;
    int min_observations = 300;
    int periodicity_halfwidth = 10;  // minutes pooled on each side per bucket
};

// Gumbel normalization constants for the max of n absolute test statistics.
struct DetectionThresholds {
    double c_n = 0.0;
    double s_n = 0.0;
    double beta_star = 0.0;
    double l_threshold = 0.0;  // flag when |L| > l_threshold
};

DetectionThresholds compute_thresholds(std::size_t n_tested, double alpha);

// Local bipower volatility at index i (0-based): products of adjacent
// absolute returns over the K-1 returns before i, scaled to estimate the
// diffusive sigma. NaN entries drop their products; the estimate renormalizes
// over the surviving count and becomes unavailable below min(K-2, 8)
// products. Requires i >= K-1 so the window exists.
std::optional<double> bipower_scale(std::span<const double> returns, std::size_t i, int window_k);

// Robust intraweek periodicity: returns are standardized by a per-day bipower
// scale, then a day-of-week MAD factor and a smoothed minute-of-session MAD
// factor are combined per bucket. Needs at least 20 distinct session days.
PeriodicityProfile estimate_periodicity(const ReturnSeries& series,
                                        const SessionCalendar& calendar,
                                        const DetectorConfig& config = {});

// Divides each return by its bucket factor. Missing values pass through.
ReturnSeries deseasonalize(const ReturnSeries& series, const PeriodicityProfile& profile,
                           const SessionCalendar& calendar);

// Lee-Mykland style detection on a (deseasonalized) series. `raw_returns`,
// when given, must parallel the series and supplies JumpEvent::raw_return.
std::vector<JumpEvent> detect_jumps(const ReturnSeries& series, const DetectorConfig& config,
                                    const std::vector<double>* raw_returns = nullptr);

}  // namespace cocrash
