#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cocrash/time_grid.hpp"

namespace cocrash {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double x) { return std::isnan(x); }

// One resampled bar: last trade price in the minute, dollar volume summed
// over the minute.
struct MinuteBar {
    Minutes timestamp = 0;
    double close_price = 0.0;
    double dollar_volume = 0.0;
};

// Log returns between consecutive same-session bars. Values may be NaN when
// the series is a grid view of a panel column; timestamps stay strictly
// increasing either way.
struct ReturnSeries {
    std::string asset_id;
    std::vector<Minutes> timestamps;
    std::vector<double> returns;

    std::size_t size() const { return timestamps.size(); }
};

// Everything known about one asset after ingestion: the session bars plus the
// derived return series (return-bearing minutes only).
struct AssetSeries {
    std::string asset_id;
    std::vector<MinuteBar> bars;
    ReturnSeries returns;
};

// Timestamp-aligned return/volume matrices over the union grid of return
// minutes. Rows follow `assets` order; NaN marks missing entries. The source
// bars are retained so a snapshot can be exported losslessly.
class PricePanel {
  public:
    PricePanel(std::vector<std::string> assets, std::vector<Minutes> grid,
               std::vector<double> returns, std::vector<double> volumes,
               std::vector<std::vector<MinuteBar>> bars);

    std::size_t n_assets() const { return assets_.size(); }
    std::size_t n_minutes() const { return grid_.size(); }

    const std::vector<std::string>& assets() const { return assets_; }
    const std::vector<Minutes>& grid() const { return grid_; }

    double return_at(std::size_t asset, std::size_t slot) const {
        return returns_[asset * grid_.size() + slot];
    }
    double volume_at(std::size_t asset, std::size_t slot) const {
        return volumes_[asset * grid_.size() + slot];
    }

    const std::vector<double>& returns_matrix() const { return returns_; }
    const std::vector<double>& volumes_matrix() const { return volumes_; }
    const std::vector<std::vector<MinuteBar>>& bars() const { return bars_; }

    std::size_t asset_index(const std::string& asset_id) const;

    // Grid view of one asset's returns (NaN where missing).
    ReturnSeries return_series(std::size_t asset) const;

    std::int64_t distinct_session_days() const;

  private:
    std::vector<std::string> assets_;
    std::vector<Minutes> grid_;
    std::vector<double> returns_;
    std::vector<double> volumes_;
    std::vector<std::vector<MinuteBar>> bars_;
};

// Derives the return series from session bars: log differences of
// consecutive bars within one session day, stamped at the later bar. Bars
// must be strictly increasing in time.
AssetSeries build_asset_series(std::string asset_id, std::vector<MinuteBar> bars);

// CSV schema: symbol,timestamp,price,dollar_volume (ISO-8601 minute
// timestamps). `path` may be a single file or a directory of *.csv files.
// Rows outside session minutes are dropped; several rows in one minute
// resample to last price / summed volume.
std::vector<AssetSeries> ingest_csv(const std::string& path, const SessionCalendar& calendar);

// Builds the shared grid (sorted union of return minutes) and places every
// series on it.
PricePanel align(const std::vector<AssetSeries>& series);

// Mean of per-session-day dollar volume sums over the panel's grid; missing
// entries contribute 0.
double average_daily_dollar_volume(const PricePanel& panel, const std::string& asset_id);

// Lossless snapshot: every bar plus a missing-flag row for each empty grid
// slot. Re-ingesting a snapshot reproduces the panel bit-for-bit.
void write_panel_snapshot(const PricePanel& panel, const std::string& path,
                          const std::string& meta_comment);

}  // namespace cocrash
