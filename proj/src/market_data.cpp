#include "cocrash/market_data.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <unordered_map>

#include "cocrash/csv.hpp"

namespace cocrash {

PricePanel::PricePanel(std::vector<std::string> assets, std::vector<Minutes> grid,
                       std::vector<double> returns, std::vector<double> volumes,
                       std::vector<std::vector<MinuteBar>> bars)
    : assets_(std::move(assets)),
      grid_(std::move(grid)),
      returns_(std::move(returns)),
      volumes_(std::move(volumes)),
      bars_(std::move(bars)) {}

std::size_t PricePanel::asset_index(const std::string& asset_id) const {
    const auto it = std::find(assets_.begin(), assets_.end(), asset_id);
    if (it == assets_.end()) throw LookupError("unknown asset '" + asset_id + "'");
    return static_cast<std::size_t>(it - assets_.begin());
}

ReturnSeries PricePanel::return_series(std::size_t asset) const {
    ReturnSeries out;
    out.asset_id = assets_[asset];
    out.timestamps = grid_;
    out.returns.assign(returns_.begin() + asset * grid_.size(),
                       returns_.begin() + (asset + 1) * grid_.size());
    return out;
}

std::int64_t PricePanel::distinct_session_days() const {
    std::int64_t days = 0;
    std::int64_t last = std::numeric_limits<std::int64_t>::min();
    for (const Minutes t : grid_) {
        const std::int64_t d = day_index(t);
        if (d != last) {
            ++days;
            last = d;
        }
    }
    return days;
}

namespace {

double parse_positive_price(const std::string& field, std::size_t line) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(field, &used);
    } catch (const std::exception&) {
        throw ParseError("bad price '" + field + "'", line);
    }
    if (used != field.size()) throw ParseError("bad price '" + field + "'", line);
    if (!(value > 0.0)) throw DataError("non-positive price at line " + std::to_string(line));
    return value;
}

double parse_volume(const std::string& field, std::size_t line) {
    if (field.empty()) return 0.0;
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(field, &used);
    } catch (const std::exception&) {
        throw ParseError("bad dollar_volume '" + field + "'", line);
    }
    if (used != field.size()) throw ParseError("bad dollar_volume '" + field + "'", line);
    if (value < 0.0) throw DataError("negative dollar_volume at line " + std::to_string(line));
    return value;
}

void ingest_one_file(const std::string& path, const SessionCalendar& calendar,
                     std::map<std::string, std::map<Minutes, MinuteBar>>& by_symbol) {
    for_each_csv_row(path,
                     {"symbol,timestamp,price,dollar_volume",
                      "symbol,timestamp,price,dollar_volume,missing"},
                     [&](const std::vector<std::string>& f, std::size_t line) {
                         if (f.size() != 4 && f.size() != 5)
                             throw ParseError("expected 4 fields, got " + std::to_string(f.size()),
                                              line);
                         // Snapshot files carry a trailing missing flag; flagged
                         // rows describe empty grid slots, not bars.
                         if (f.size() == 5 && f[4] == "1") return;
                         if (f[0].empty()) throw ParseError("empty symbol", line);
                         Minutes t;
                         try {
                             t = parse_iso_minute(f[1]);
                         } catch (const ParseError& e) {
                             throw ParseError(e.what(), line);
                         }
                         if (!calendar.is_session_minute(t)) return;
                         const double price = parse_positive_price(f[2], line);
                         const double volume = parse_volume(f[3], line);
                         auto& slot = by_symbol[f[0]][t];
                         slot.timestamp = t;
                         slot.close_price = price;  // last trade in minute wins
                         slot.dollar_volume += volume;
                     });
}

}  // namespace

AssetSeries build_asset_series(std::string asset_id, std::vector<MinuteBar> bars) {
    AssetSeries series;
    series.asset_id = asset_id;
    series.returns.asset_id = std::move(asset_id);
    series.bars = std::move(bars);
    for (std::size_t i = 1; i < series.bars.size(); ++i) {
        const MinuteBar& prev = series.bars[i - 1];
        const MinuteBar& cur = series.bars[i];
        if (cur.timestamp <= prev.timestamp)
            throw DataError("bars for '" + series.asset_id + "' are not strictly increasing");
        if (day_index(prev.timestamp) != day_index(cur.timestamp)) continue;  // overnight
        series.returns.timestamps.push_back(cur.timestamp);
        series.returns.returns.push_back(std::log(cur.close_price / prev.close_price));
    }
    return series;
}

std::vector<AssetSeries> ingest_csv(const std::string& path, const SessionCalendar& calendar) {
    namespace fs = std::filesystem;
    std::map<std::string, std::map<Minutes, MinuteBar>> by_symbol;

    if (fs::is_directory(path)) {
        std::vector<std::string> files;
        for (const auto& entry : fs::directory_iterator(path))
            if (entry.path().extension() == ".csv") files.push_back(entry.path().string());
        std::sort(files.begin(), files.end());
        if (files.empty()) throw DataError("no .csv files in directory '" + path + "'");
        for (const auto& f : files) ingest_one_file(f, calendar, by_symbol);
    } else {
        ingest_one_file(path, calendar, by_symbol);
    }
    if (by_symbol.empty()) throw DataError("empty input: no data rows in '" + path + "'");

    std::vector<AssetSeries> out;
    out.reserve(by_symbol.size());
    for (auto& [symbol, bars_by_minute] : by_symbol) {
        std::vector<MinuteBar> bars;
        bars.reserve(bars_by_minute.size());
        for (auto& [t, bar] : bars_by_minute) bars.push_back(bar);
        out.push_back(build_asset_series(symbol, std::move(bars)));
    }
    return out;
}

PricePanel align(const std::vector<AssetSeries>& series) {
    if (series.size() < 2) throw ConfigError("align needs at least 2 series");

    std::set<Minutes> grid_set;
    for (const auto& s : series)
        grid_set.insert(s.returns.timestamps.begin(), s.returns.timestamps.end());
    std::vector<Minutes> grid(grid_set.begin(), grid_set.end());

    std::unordered_map<Minutes, std::size_t> slot_of;
    slot_of.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) slot_of[grid[i]] = i;

    const std::size_t n = series.size();
    const std::size_t t = grid.size();
    std::vector<double> returns(n * t, kMissing);
    std::vector<double> volumes(n * t, kMissing);
    std::vector<std::string> assets;
    std::vector<std::vector<MinuteBar>> bars;
    assets.reserve(n);
    bars.reserve(n);

    for (std::size_t x = 0; x < n; ++x) {
        const auto& s = series[x];
        assets.push_back(s.asset_id);
        bars.push_back(s.bars);
        for (std::size_t i = 0; i < s.returns.size(); ++i)
            returns[x * t + slot_of.at(s.returns.timestamps[i])] = s.returns.returns[i];
        for (const MinuteBar& bar : s.bars) {
            const auto it = slot_of.find(bar.timestamp);
            if (it != slot_of.end()) volumes[x * t + it->second] = bar.dollar_volume;
        }
    }
    return PricePanel(std::move(assets), std::move(grid), std::move(returns), std::move(volumes),
                      std::move(bars));
}

double average_daily_dollar_volume(const PricePanel& panel, const std::string& asset_id) {
    const std::size_t x = panel.asset_index(asset_id);
    const std::int64_t days = panel.distinct_session_days();
    if (days == 0) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < panel.n_minutes(); ++i) {
        const double v = panel.volume_at(x, i);
        if (!is_missing(v)) total += v;
    }
    return total / static_cast<double>(days);
}

void write_panel_snapshot(const PricePanel& panel, const std::string& path,
                          const std::string& meta_comment) {
    CsvWriter out(path, meta_comment, "symbol,timestamp,price,dollar_volume,missing");
    for (std::size_t x = 0; x < panel.n_assets(); ++x) {
        const std::string& symbol = panel.assets()[x];
        std::set<Minutes> bar_minutes;
        for (const MinuteBar& bar : panel.bars()[x]) {
            bar_minutes.insert(bar.timestamp);
            out.write_row(symbol + "," + format_iso_minute(bar.timestamp) + "," +
                          format_double(bar.close_price) + "," + format_double(bar.dollar_volume) +
                          ",0");
        }
        for (const Minutes t : panel.grid())
            if (bar_minutes.find(t) == bar_minutes.end())
                out.write_row(symbol + "," + format_iso_minute(t) + ",,,1");
    }
    out.close();
}

}  // namespace cocrash
