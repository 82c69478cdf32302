#include "cocrash/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "cocrash/csv.hpp"
#include "cocrash/error.hpp"
#include "cocrash/null_model.hpp"
#include "cocrash/parallel.hpp"
#include "cocrash/rng.hpp"

namespace cocrash {

namespace {

// Substream bases keep the per-asset, per-event and bookkeeping draws on
// non-overlapping streams of the same master seed.
constexpr std::uint64_t kScheduleStream = 1u << 20;
constexpr std::uint64_t kEventStreamBase = 1u << 21;
constexpr std::uint64_t kVolumeStream = 1u << 22;

}  // namespace

SimulationPlan SimulationPlan::from_config(const KeyValueConfig& cfg) {
    SimulationPlan plan;
    plan.n_assets = static_cast<std::size_t>(cfg.get_int("n_assets", 300));
    plan.n_weeks = static_cast<int>(cfg.get_int("n_weeks", 10));
    plan.base_vol = cfg.get_double("base_vol", 5e-4);
    plan.start_day = parse_iso_date(cfg.get_or("start_date", "2024-01-08"));
    plan.session_open = parse_hhmm(cfg.get_or("session_open", "09:30"));
    plan.session_close = parse_hhmm(cfg.get_or("session_close", "16:00"));
    for (const auto& d : cfg.get_all("holiday")) plan.holidays.push_back(parse_iso_date(d));
    plan.periodicity_open_mult = cfg.get_double("periodicity_open_mult", 1.0);
    plan.periodicity_close_mult = cfg.get_double("periodicity_close_mult", 1.0);
    plan.systemic_count = static_cast<std::size_t>(cfg.get_int("systemic_count", 0));
    plan.fragile_count = static_cast<std::size_t>(cfg.get_int("fragile_count", 0));
    plan.jump_magnitude = cfg.get_double("jump_magnitude", 15.0);
    const std::string dir = cfg.get_or("jump_direction", "down");
    if (dir == "down")
        plan.jump_direction = -1;
    else if (dir == "up")
        plan.jump_direction = 1;
    else if (dir == "mixed")
        plan.jump_direction = 0;
    else
        throw ConfigError("jump_direction must be down|up|mixed, got '" + dir + "'");
    plan.member_weight_decay = cfg.get_double("member_weight_decay", 0.93);
    plan.fragile_dtv_band = cfg.get_double("fragile_dtv_band", 1.0);
    if (!(plan.fragile_dtv_band > 0.0 && plan.fragile_dtv_band <= 1.0))
        throw ConfigError("fragile_dtv_band must be in (0, 1]");
    plan.auto_events_per_size = static_cast<std::size_t>(cfg.get_int("auto_events_per_size", 0));
    plan.auto_min_size = static_cast<std::size_t>(cfg.get_int("auto_min_size", 1));
    plan.auto_max_size = static_cast<std::size_t>(cfg.get_int("auto_max_size", 0));
    plan.auto_threshold = static_cast<std::size_t>(cfg.get_int("auto_threshold", 5));
    plan.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
    for (const auto& spec : cfg.get_all("event")) {
        const auto fields = split_csv_line(spec);
        if (fields.size() != 3)
            throw ConfigError("event entry must be 'timestamp,size,regime': '" + spec + "'");
        PlannedEvent ev;
        ev.timestamp = parse_iso_minute(fields[0]);
        ev.size = static_cast<std::size_t>(std::stoll(fields[1]));
        if (fields[2] == "fragile")
            ev.regime = Regime::fragile;
        else if (fields[2] == "systemic")
            ev.regime = Regime::systemic;
        else
            throw ConfigError("event regime must be fragile|systemic: '" + spec + "'");
        plan.explicit_events.push_back(ev);
    }
    return plan;
}

SessionCalendar SimulationPlan::calendar() const {
    std::set<std::int64_t> h(holidays.begin(), holidays.end());
    return SessionCalendar(session_open, session_close, std::move(h));
}

std::string SimulationPlan::asset_name(std::size_t index) const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "A%04zu", index);
    return buf;
}

namespace {

struct Injection {
    double magnitude_sigma;  // signed, in local-sigma units
};

std::vector<double> session_shape(const SimulationPlan& plan) {
    const int mps = plan.session_close - plan.session_open;
    std::vector<double> shape(static_cast<std::size_t>(mps));
    double mean_square = 0.0;
    for (int m = 0; m < mps; ++m) {
        const double open_term = (plan.periodicity_open_mult - 1.0) * std::exp(-m / 45.0);
        const double close_term =
            (plan.periodicity_close_mult - 1.0) * std::exp(-(mps - 1 - m) / 45.0);
        const double f = 1.0 + open_term + close_term;
        shape[static_cast<std::size_t>(m)] = f;
        mean_square += f * f;
    }
    mean_square /= mps;
    for (double& f : shape) f /= std::sqrt(mean_square);
    return shape;
}

}  // namespace

SimulationResult simulate(const SimulationPlan& plan, int threads) {
    if (plan.n_assets < 2) throw PlanError("plan needs at least 2 assets");
    if (plan.n_weeks < 1) throw PlanError("plan needs at least 1 week");
    if (day_of_week(plan.start_day * kMinutesPerDay) != 0)
        throw PlanError("start_date must be a Monday");
    if (plan.systemic_count + plan.fragile_count > plan.n_assets)
        throw PlanError("fragile and systemic sets exceed the universe");

    const SessionCalendar calendar = plan.calendar();
    const std::vector<Minutes> grid = calendar.session_grid(plan.start_day, plan.n_weeks);
    if (grid.empty()) throw PlanError("plan produces an empty session grid");
    const int mps = calendar.minutes_per_session();
    const std::vector<double> shape = session_shape(plan);

    // --- Schedule ---------------------------------------------------------
    struct Scheduled {
        std::size_t slot;
        std::size_t size;
        Regime regime;
    };
    std::vector<Scheduled> schedule;

    std::map<Minutes, std::size_t> slot_of;
    for (std::size_t i = 0; i < grid.size(); ++i) slot_of[grid[i]] = i;

    // Auto events land on distinct eligible minutes: past the opening margin
    // (so detectors have a full volatility window) and never on a day's
    // first session minute (that return is dropped at ingestion).
    const std::size_t margin = std::min<std::size_t>(grid.size() / 4, 400);
    std::vector<std::size_t> eligible;
    for (std::size_t i = margin; i < grid.size(); ++i)
        if (minute_of_day(grid[i]) != calendar.open_minute()) eligible.push_back(i);

    if (plan.auto_events_per_size > 0) {
        if (plan.auto_max_size < plan.auto_min_size)
            throw PlanError("auto_max_size below auto_min_size");
        const std::size_t n_sizes = plan.auto_max_size - plan.auto_min_size + 1;
        const std::size_t n_events = n_sizes * plan.auto_events_per_size;
        if (n_events > eligible.size())
            throw PlanError("auto schedule needs " + std::to_string(n_events) +
                            " eligible minutes, grid offers " + std::to_string(eligible.size()));
        Rng rng(plan.seed, kScheduleStream);
        for (std::size_t j = eligible.size(); j > 1; --j)
            std::swap(eligible[j - 1], eligible[rng.uniform_below(j)]);
        std::size_t next = 0;
        for (std::size_t size = plan.auto_min_size; size <= plan.auto_max_size; ++size)
            for (std::size_t e = 0; e < plan.auto_events_per_size; ++e)
                schedule.push_back({eligible[next++], size,
                                    size < plan.auto_threshold ? Regime::fragile
                                                               : Regime::systemic});
    }
    for (const PlannedEvent& ev : plan.explicit_events) {
        const auto it = slot_of.find(ev.timestamp);
        if (it == slot_of.end())
            throw PlanError("event timestamp " + format_iso_minute(ev.timestamp) +
                            " is not on the session grid");
        if (minute_of_day(ev.timestamp) == calendar.open_minute())
            throw PlanError("event at " + format_iso_minute(ev.timestamp) +
                            " falls on a day's first minute; its return is dropped");
        if (ev.size < 1) throw PlanError("event size must be >= 1");
        schedule.push_back({it->second, ev.size, ev.regime});
    }

    // --- Member selection -------------------------------------------------
    const int fixed_direction = plan.jump_direction;
    std::vector<std::map<std::size_t, Injection>> injections(grid.size());
    GroundTruth truth;
    truth.jumps_by_asset.resize(plan.n_assets);

    std::map<Minutes, CoCrashEvent> truth_by_minute;
    for (std::size_t e = 0; e < schedule.size(); ++e) {
        const Scheduled& ev = schedule[e];
        const std::size_t set_base = ev.regime == Regime::systemic ? 0 : plan.systemic_count;
        const std::size_t set_size =
            ev.regime == Regime::systemic ? plan.systemic_count : plan.fragile_count;
        if (ev.size > set_size)
            throw PlanError("event of size " + std::to_string(ev.size) + " exceeds its " +
                            (ev.regime == Regime::systemic ? std::string("systemic")
                                                           : std::string("fragile")) +
                            " set of " + std::to_string(set_size));

        Rng rng(plan.seed, kEventStreamBase + e);
        ShuffleWeights weights;
        weights.weights.resize(set_size);
        double w = 1.0;
        for (std::size_t i = 0; i < set_size; ++i, w *= plan.member_weight_decay) {
            weights.weights[i] = w;
            weights.total += w;
        }
        const std::vector<std::size_t> order = weighted_shuffle(weights, rng);

        CoCrashEvent& tev = truth_by_minute[grid[ev.slot]];
        tev.timestamp = grid[ev.slot];
        for (std::size_t i = 0; i < ev.size; ++i) {
            const std::size_t asset = set_base + order[i];
            const int direction =
                fixed_direction != 0 ? fixed_direction : (rng.uniform() < 0.5 ? -1 : 1);
            if (!injections[ev.slot].emplace(asset, Injection{direction * plan.jump_magnitude})
                     .second)
                throw PlanError("schedule conflict: " + plan.asset_name(asset) +
                                " scheduled twice at " + format_iso_minute(grid[ev.slot]));
            tev.members.push_back(plan.asset_name(asset));
            tev.directions[plan.asset_name(asset)] = direction;
            truth.jumps_by_asset[asset].push_back(grid[ev.slot]);
        }
    }
    for (auto& [t, ev] : truth_by_minute) {
        std::sort(ev.members.begin(), ev.members.end());
        truth.events.push_back(std::move(ev));
    }
    for (auto& jumps : truth.jumps_by_asset) std::sort(jumps.begin(), jumps.end());

    // --- Dollar volume levels ---------------------------------------------
    // Systemic assets take the top of the DTV ladder; everyone else gets a
    // seed-shuffled ladder strictly below it.
    std::vector<double> dtv(plan.n_assets);
    for (std::size_t i = 0; i < plan.systemic_count; ++i)
        dtv[i] = 2e9 * std::pow(0.98, static_cast<double>(i));
    {
        const std::size_t rest = plan.n_assets - plan.systemic_count;
        std::vector<double> ladder(rest);  // descending, strictly below systemic
        for (std::size_t j = 0; j < rest; ++j) {
            const double frac =
                rest == 1 ? 0.0 : static_cast<double>(j) / static_cast<double>(rest - 1);
            ladder[j] = 5e8 * (1.0 - frac) + 1e7 * frac;
        }
        const std::size_t band = std::min(
            rest, std::max(plan.fragile_count,
                           static_cast<std::size_t>(
                               std::ceil(plan.fragile_dtv_band * static_cast<double>(rest)))));
        std::vector<std::size_t> rungs(band);
        for (std::size_t i = 0; i < band; ++i) rungs[i] = i;
        Rng rng(plan.seed, kVolumeStream);
        for (std::size_t j = band; j > 1; --j)
            std::swap(rungs[j - 1], rungs[rng.uniform_below(j)]);
        std::vector<bool> taken(rest, false);
        for (std::size_t i = 0; i < plan.fragile_count; ++i) {
            dtv[plan.systemic_count + i] = ladder[rungs[i]];
            taken[rungs[i]] = true;
        }
        std::size_t next = 0;
        for (std::size_t i = plan.fragile_count; i < rest; ++i) {
            while (taken[next]) ++next;
            dtv[plan.systemic_count + i] = ladder[next];
            taken[next] = true;
        }
    }

    // --- Baseline noise + injections, prices, bars -------------------------
    std::vector<AssetSeries> series(plan.n_assets);
    parallel_for(plan.n_assets, threads, [&](std::size_t x) {
        Rng rng(plan.seed, x);
        std::vector<MinuteBar> bars(grid.size());
        double log_price = std::log(100.0);
        const double minute_volume = dtv[x] / mps;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const int minute = minute_of_day(grid[i]) - calendar.open_minute();
            const double sigma = plan.base_vol * shape[static_cast<std::size_t>(minute)];
            double r = sigma * rng.normal();
            const auto inj = injections[i].find(x);
            if (inj != injections[i].end()) r += inj->second.magnitude_sigma * sigma;
            log_price += r;
            bars[i] = {grid[i], std::exp(log_price), minute_volume};
        }
        series[x] = build_asset_series(plan.asset_name(x), std::move(bars));
    });

    return SimulationResult{align(series), std::move(truth)};
}

Score score(const std::vector<CoCrashEvent>& detected, const GroundTruth& truth) {
    std::map<Minutes, const CoCrashEvent*> truth_by_minute;
    for (const auto& ev : truth.events) truth_by_minute[ev.timestamp] = &ev;

    Score s;
    std::size_t hits = 0;
    for (const auto& ev : detected) {
        const auto it = truth_by_minute.find(ev.timestamp);
        if (it == truth_by_minute.end()) continue;
        if (it->second->members == ev.members)
            ++hits;
        else
            s.size_confusion.push_back({it->second->size_m(), ev.size_m()});
    }
    if (!detected.empty())
        s.precision = static_cast<double>(hits) / static_cast<double>(detected.size());
    if (!truth.events.empty())
        s.recall = static_cast<double>(hits) / static_cast<double>(truth.events.size());
    return s;
}

void write_ground_truth(const GroundTruth& truth, const std::string& path,
                        const std::string& meta_comment) {
    CsvWriter out(path, meta_comment, "timestamp,size,members,directions");
    for (const auto& ev : truth.events) {
        std::string members, directions;
        for (std::size_t i = 0; i < ev.members.size(); ++i) {
            if (i) {
                members += ';';
                directions += ';';
            }
            members += ev.members[i];
            directions += std::to_string(ev.directions.at(ev.members[i]));
        }
        out.write_row(format_iso_minute(ev.timestamp) + "," + std::to_string(ev.size_m()) + "," +
                      members + "," + directions);
    }
    out.close();
}

}  // namespace cocrash
