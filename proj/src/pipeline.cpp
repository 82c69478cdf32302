#include "cocrash/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cocrash/csv.hpp"
#include "cocrash/parallel.hpp"

namespace fs = std::filesystem;

namespace cocrash {

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
    try {
        return fn();
    } catch (const StageFailure&) {
        throw;
    } catch (const std::exception& e) {
        throw StageFailure(name, e.what());
    }
}

}  // namespace

RunConfig RunConfig::from_config(const KeyValueConfig& cfg) {
    RunConfig rc;
    rc.raw_ = cfg;
    rc.input_path = cfg.get_or("input", "");
    rc.output_dir = cfg.get_or("output", "out");
    rc.session_open = cfg.get_or("session_open", "09:30");
    rc.session_close = cfg.get_or("session_close", "16:00");
    rc.holidays = cfg.get_all("holiday");
    rc.detector.alpha = cfg.get_double("alpha", 0.05);
    rc.detector.window_k = static_cast<int>(cfg.get_int("window_k", 270));
    rc.detector.min_observations = static_cast<int>(cfg.get_int("min_observations", 300));
    rc.detector.periodicity_halfwidth =
        static_cast<int>(cfg.get_int("periodicity_halfwidth", 10));
    rc.direction = cfg.get_or("direction", "both");
    if (rc.direction != "both" && rc.direction != "down" && rc.direction != "up")
        throw ConfigError("direction must be both|down|up, got '" + rc.direction + "'");
    rc.steady_lo = static_cast<int>(cfg.get_int("steady_lo", 2));
    rc.steady_hi = static_cast<int>(cfg.get_int("steady_hi", 20));
    rc.null_samples = static_cast<std::size_t>(cfg.get_int("null_samples", 100000));
    rc.top_k = static_cast<std::size_t>(cfg.get_int("top_k", 20));
    rc.vol_corr_shuffles = static_cast<std::size_t>(cfg.get_int("vol_corr_shuffles", 10000));
    rc.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
    rc.threads = static_cast<int>(cfg.get_int("threads", 0));
    if (!(rc.detector.alpha > 0.0 && rc.detector.alpha < 1.0))
        throw ConfigError("alpha must be in (0, 1)");
    return rc;
}

SessionCalendar RunConfig::calendar() const {
    return SessionCalendar::from_config(session_open, session_close, holidays);
}

std::string RunConfig::config_hash() const {
    // Re-render from parsed fields so defaults, file order and the excluded
    // keys (threads, output) cannot change the hash.
    KeyValueConfig canon;
    canon.set("input", input_path);
    canon.set("session_open", session_open);
    canon.set("session_close", session_close);
    std::string holiday_list;
    for (const auto& h : holidays) holiday_list += h + ";";
    canon.set("holidays", holiday_list);
    canon.set("alpha", format_double(detector.alpha));
    canon.set("window_k", std::to_string(detector.window_k));
    canon.set("min_observations", std::to_string(detector.min_observations));
    canon.set("periodicity_halfwidth", std::to_string(detector.periodicity_halfwidth));
    canon.set("direction", direction);
    canon.set("steady_lo", std::to_string(steady_lo));
    canon.set("steady_hi", std::to_string(steady_hi));
    canon.set("null_samples", std::to_string(null_samples));
    canon.set("top_k", std::to_string(top_k));
    canon.set("vol_corr_shuffles", std::to_string(vol_corr_shuffles));
    canon.set("seed", std::to_string(seed));
    return fnv1a_hex(canon.canonical_text());
}

std::string RunConfig::meta_comment() const {
    return "config_hash=" + config_hash() + " seed=" + std::to_string(seed);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t state = seed ^ (0xd6e8feb86659fd93ull * (tag + 1));
    return splitmix64(state);
}

std::vector<std::string> with_quarantine(const std::string& output_dir,
                                         const std::function<void(const std::string&)>& work) {
    const fs::path out(output_dir);
    const fs::path partial = out / ".partial";
    fs::create_directories(partial);
    for (const auto& entry : fs::directory_iterator(partial)) fs::remove_all(entry.path());

    work(partial.string());

    std::vector<std::string> produced;
    for (const auto& entry : fs::directory_iterator(partial))
        produced.push_back(entry.path().filename().string());
    std::sort(produced.begin(), produced.end());
    for (const auto& name : produced) fs::rename(partial / name, out / name);
    fs::remove_all(partial);
    return produced;
}

// ---------------------------------------------------------------------------
// Stage computations

namespace {

PeriodicityProfile identity_profile(const SessionCalendar& calendar) {
    PeriodicityProfile p;
    p.bucket_count = calendar.buckets_per_week();
    p.bucket_factors.assign(static_cast<std::size_t>(p.bucket_count), 1.0);
    return p;
}

}  // namespace

DetectOutput detect_panel(const PricePanel& panel, const SessionCalendar& calendar,
                          const DetectorConfig& config, int threads) {
    const std::size_t n = panel.n_assets();
    std::vector<std::vector<JumpEvent>> per_asset(n);
    std::vector<char> skipped(n, 0);

    parallel_for(n, threads, [&](std::size_t x) {
        const ReturnSeries series = panel.return_series(x);
        std::size_t usable = 0;
        for (const double r : series.returns) usable += !is_missing(r);
        if (series.size() < static_cast<std::size_t>(config.window_k) + 1 ||
            usable < static_cast<std::size_t>(config.min_observations)) {
            skipped[x] = 1;
            return;
        }
        PeriodicityProfile profile;
        try {
            profile = estimate_periodicity(series, calendar, config);
        } catch (const ConfigError&) {
            profile = identity_profile(calendar);  // too little data; no adjustment
        }
        const ReturnSeries adjusted = deseasonalize(series, profile, calendar);
        per_asset[x] = detect_jumps(adjusted, config, &series.returns);
    });

    DetectOutput out;
    for (std::size_t x = 0; x < n; ++x) {
        if (skipped[x]) out.skipped_assets.push_back(panel.assets()[x]);
        out.events.insert(out.events.end(), per_asset[x].begin(), per_asset[x].end());
    }
    return out;
}

std::vector<JumpEvent> filter_direction(const std::vector<JumpEvent>& events,
                                        const std::string& direction) {
    if (direction == "both") return events;
    if (direction != "down" && direction != "up")
        throw ConfigError("direction must be both|down|up");
    const int wanted = direction == "down" ? -1 : 1;
    std::vector<JumpEvent> out;
    for (const auto& e : events)
        if (e.direction == wanted) out.push_back(e);
    return out;
}

SignificanceOutput compute_significance(const CrashFrequencyTable& table,
                                        const std::vector<CorrelationCurve>& curves,
                                        const RunConfig& config) {
    SignificanceOutput out;
    std::vector<std::optional<SignificanceRow>> steady(curves.size());
    std::vector<std::vector<SignificanceByTauRow>> by_tau(curves.size());

    parallel_for(curves.size(), config.threads, [&](std::size_t c) {
        const CorrelationCurve& curve = curves[c];
        const std::size_t m = curve.base_size;
        const RankVector base = rank_assets(table, m);
        const ShuffleWeights weights = ShuffleWeights::from_table(table, m);
        const NullDistribution null =
            build_null(base, weights, config.null_samples, derive_seed(config.seed, m), 1);
        if (null.samples.empty()) return;

        for (std::size_t tau = 1; tau - 1 < curve.rho_by_tau.size(); ++tau) {
            const auto& rho = curve.rho_by_tau[tau - 1];
            if (!rho) continue;
            by_tau[c].push_back({m, tau, *rho, null.quantile_of(*rho)});
        }
        const auto ss = steady_state(curve, config.steady_lo, config.steady_hi);
        if (ss) steady[c] = SignificanceRow{m, ss->mean_rho, null.quantile_of(ss->mean_rho)};
    });

    for (std::size_t c = 0; c < curves.size(); ++c) {
        if (steady[c]) out.steady.push_back(*steady[c]);
        out.by_tau.insert(out.by_tau.end(), by_tau[c].begin(), by_tau[c].end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Artifact IO

void write_events_csv(const std::vector<JumpEvent>& events, const std::string& path,
                      const std::string& meta) {
    CsvWriter out(path, meta, "symbol,timestamp,statistic,direction,raw_return");
    for (const auto& e : events)
        out.write_row(e.asset_id + "," + format_iso_minute(e.timestamp) + "," +
                      format_double(e.statistic) + "," + std::to_string(e.direction) + "," +
                      format_double(e.raw_return));
    out.close();
}

std::vector<JumpEvent> load_events_csv(const std::string& path) {
    std::vector<JumpEvent> events;
    for_each_csv_row(path, {"symbol,timestamp,statistic,direction,raw_return"},
                     [&](const std::vector<std::string>& f, std::size_t line) {
                         if (f.size() != 5) throw ParseError("expected 5 fields", line);
                         JumpEvent e;
                         e.asset_id = f[0];
                         e.timestamp = parse_iso_minute(f[1]);
                         e.statistic = std::stod(f[2]);
                         e.direction = static_cast<int>(std::stol(f[3]));
                         e.raw_return = std::stod(f[4]);
                         events.push_back(std::move(e));
                     });
    return events;
}

void write_universe_csv(const std::vector<std::string>& universe, const std::string& path,
                        const std::string& meta) {
    CsvWriter out(path, meta, "symbol");
    for (const auto& s : universe) out.write_row(s);
    out.close();
}

std::vector<std::string> load_universe_csv(const std::string& path) {
    std::vector<std::string> universe;
    for_each_csv_row(path, {"symbol"},
                     [&](const std::vector<std::string>& f, std::size_t line) {
                         if (f.size() != 1 || f[0].empty())
                             throw ParseError("expected one symbol", line);
                         universe.push_back(f[0]);
                     });
    return universe;
}

namespace {

std::string join_semicolon(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ';';
        out += items[i];
    }
    return out;
}

std::vector<std::string> split_semicolon(const std::string& text) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t pos = text.find(';', start);
        if (pos == std::string::npos) {
            items.push_back(text.substr(start));
            break;
        }
        items.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
    return items;
}

}  // namespace

void write_cocrash_events_csv(const std::vector<CoCrashEvent>& events, const std::string& path,
                              const std::string& meta) {
    CsvWriter out(path, meta, "timestamp,size,members");
    for (const auto& ev : events)
        out.write_row(format_iso_minute(ev.timestamp) + "," + std::to_string(ev.size_m()) + "," +
                      join_semicolon(ev.members));
    out.close();
}

std::vector<CoCrashEvent> load_cocrash_events_csv(const std::string& path) {
    std::vector<CoCrashEvent> events;
    for_each_csv_row(path, {"timestamp,size,members"},
                     [&](const std::vector<std::string>& f, std::size_t line) {
                         if (f.size() != 3) throw ParseError("expected 3 fields", line);
                         CoCrashEvent ev;
                         ev.timestamp = parse_iso_minute(f[0]);
                         ev.members = split_semicolon(f[2]);
                         if (ev.members.size() != static_cast<std::size_t>(std::stoll(f[1])))
                             throw ParseError("size does not match member list", line);
                         events.push_back(std::move(ev));
                     });
    return events;
}

void write_crash_frequency_csv(const CrashFrequencyTable& table, const std::string& path,
                               const std::string& meta) {
    CsvWriter out(path, meta, "symbol,size,count");
    for (std::size_t x = 0; x < table.universe().size(); ++x)
        for (std::size_t m = 1; m <= table.max_size(); ++m)
            if (table.count(x, m) > 0)
                out.write_row(table.universe()[x] + "," + std::to_string(m) + "," +
                              std::to_string(table.count(x, m)));
    out.close();
}

CrashFrequencyTable load_crash_frequency_csv(const std::string& path,
                                             const std::vector<std::string>& universe) {
    struct Row {
        std::string symbol;
        std::size_t m;
        std::uint64_t count;
    };
    std::vector<Row> rows;
    std::size_t max_size = 0;
    for_each_csv_row(path, {"symbol,size,count"},
                     [&](const std::vector<std::string>& f, std::size_t line) {
                         if (f.size() != 3) throw ParseError("expected 3 fields", line);
                         Row r{f[0], static_cast<std::size_t>(std::stoull(f[1])),
                               std::stoull(f[2])};
                         if (r.m == 0) throw ParseError("size must be >= 1", line);
                         max_size = std::max(max_size, r.m);
                         rows.push_back(std::move(r));
                     });
    CrashFrequencyTable table(universe, max_size);
    for (const auto& r : rows) table.count_ref(table.asset_index(r.symbol), r.m) += r.count;
    // n_m follows from the marginal identity f_m == m * n_m.
    for (std::size_t m = 1; m <= max_size; ++m) {
        const std::uint64_t f_m = table.marginal(m);
        if (f_m % m != 0)
            throw DataError("crash frequency table violates f_m == m*n_m at size " +
                            std::to_string(m));
        table.set_events_at(m, f_m / m);
    }
    return table;
}

// ---------------------------------------------------------------------------
// Orchestration

void write_cojump_outputs(const std::vector<CoCrashEvent>& cocrashes,
                          const CrashFrequencyTable& table, const std::string& meta,
                          const std::string& dir) {
    write_cocrash_events_csv(cocrashes, dir + "/" + artifact::kCoCrashEvents, meta);
    write_crash_frequency_csv(table, dir + "/" + artifact::kCrashFrequency, meta);
    CsvWriter dist_csv(dir + "/" + artifact::kSizeDistribution, meta, "m,f_m_events,ccdf");
    if (table.total_events() > 0) {
        const SizeDistribution dist = size_distribution(table);
        for (std::size_t m = 1; m <= table.max_size(); ++m)
            dist_csv.write_row(std::to_string(m) + "," +
                               std::to_string(dist.events_by_size[m]) + "," +
                               std::to_string(dist.tail_cumulative[m]));
    }
    dist_csv.close();
}

void write_rank_outputs(const std::vector<CorrelationCurve>& curves, const RunConfig& config,
                        const std::string& dir) {
    CsvWriter curves_csv(dir + "/" + artifact::kRankCorrCurves, config.meta_comment(),
                         "m,tau,rho");
    for (const auto& curve : curves)
        for (std::size_t tau = 1; tau - 1 < curve.rho_by_tau.size(); ++tau) {
            const auto& rho = curve.rho_by_tau[tau - 1];
            if (!rho) continue;
            curves_csv.write_row(std::to_string(curve.base_size) + "," + std::to_string(tau) +
                                 "," + format_double(*rho));
        }
    curves_csv.close();

    CsvWriter steady_csv(dir + "/" + artifact::kSteadyState, config.meta_comment(),
                         "m,mean_rho,n_points,truncated");
    for (const auto& curve : curves) {
        const auto ss = steady_state(curve, config.steady_lo, config.steady_hi);
        if (!ss) continue;
        steady_csv.write_row(std::to_string(ss->base_size) + "," + format_double(ss->mean_rho) +
                             "," + std::to_string(ss->n_points) + "," +
                             (ss->truncated ? "1" : "0"));
    }
    steady_csv.close();
}

void write_significance_outputs(const SignificanceOutput& sig, const RunConfig& config,
                                const std::string& dir) {
    CsvWriter steady(dir + "/" + artifact::kSignificance, config.meta_comment(),
                     "m,observed_rho,quantile,n_samples,seed");
    for (const auto& row : sig.steady)
        steady.write_row(std::to_string(row.m) + "," + format_double(row.observed_rho) + "," +
                         format_double(row.quantile) + "," + std::to_string(config.null_samples) +
                         "," + std::to_string(config.seed));
    steady.close();

    CsvWriter by_tau(dir + "/" + artifact::kSignificanceByTau, config.meta_comment(),
                     "m,tau,observed_rho,quantile,n_samples,seed");
    for (const auto& row : sig.by_tau)
        by_tau.write_row(std::to_string(row.m) + "," + std::to_string(row.tau) + "," +
                         format_double(row.observed_rho) + "," + format_double(row.quantile) +
                         "," + std::to_string(config.null_samples) + "," +
                         std::to_string(config.seed));
    by_tau.close();
}

void write_liquidity_outputs(const PricePanel& panel, const std::vector<CoCrashEvent>& cocrashes,
                             const CrashFrequencyTable& table, const RunConfig& config,
                             const std::string& dir) {
    const LiquidityProfile profile = LiquidityProfile::from_panel(panel, config.top_k);

    CsvWriter dtv(dir + "/" + artifact::kDtvBySize, config.meta_comment(), "m,dtv_m");
    for (std::size_t m = 1; m <= table.max_size(); ++m) {
        const auto value = crash_weighted_dtv(table, profile, m);
        if (value) dtv.write_row(std::to_string(m) + "," + format_double(*value));
    }
    dtv.close();

    CsvWriter corr(dir + "/" + artifact::kVolFreqCorr, config.meta_comment(),
                   "m,rho,significant");
    for (std::size_t m = 1; m <= table.max_size(); ++m) {
        if (table.events_at(m) == 0) continue;
        const auto result = volume_frequency_correlation(
            table, profile, m, config.detector.alpha, config.vol_corr_shuffles,
            derive_seed(config.seed, 0x10000 + m));
        if (result)
            corr.write_row(std::to_string(m) + "," + format_double(result->rho) + "," +
                           (result->significant ? "1" : "0"));
    }
    corr.close();

    CsvWriter frac(dir + "/" + artifact::kLiquidFraction, config.meta_comment(), "m,fraction,k");
    for (std::size_t m = 1; m <= table.max_size(); ++m) {
        const auto fraction = liquid_crash_fraction(cocrashes, table, profile, m);
        if (fraction)
            frac.write_row(std::to_string(m) + "," + format_double(*fraction) + "," +
                           std::to_string(config.top_k));
    }
    frac.close();
}

namespace {

void write_manifest(const std::string& dir, const std::string& config_hash, std::uint64_t seed,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& notes) {
    nlohmann::json manifest;
    manifest["tool"] = "cocrash";
    manifest["version"] = kToolVersion;
    manifest["config_hash"] = config_hash;
    manifest["seed"] = seed;
    manifest["inputs"] = inputs;
    manifest["notes"] = notes;

    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir))
        names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    nlohmann::json artifacts = nlohmann::json::array();
    for (const auto& name : names)
        artifacts.push_back({{"file", name}, {"fnv1a", fnv1a_hex(read_file(dir + "/" + name))}});
    manifest["artifacts"] = artifacts;

    std::ofstream out(dir + "/" + artifact::kManifest, std::ios::binary);
    out << manifest.dump(2) << '\n';
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& config) {
    const SessionCalendar calendar = config.calendar();
    const std::string meta = config.meta_comment();

    PipelineResult result;
    result.artifacts = with_quarantine(config.output_dir, [&](const std::string& dir) {
        auto panel = stage("ingest", [&] {
            if (config.input_path.empty()) throw ConfigError("config key 'input' is required");
            auto series = ingest_csv(config.input_path, calendar);
            if (series.size() < 2)
                throw DataError("need at least 2 assets, got " + std::to_string(series.size()));
            PricePanel p = align(series);
            write_panel_snapshot(p, dir + "/" + artifact::kPanelSnapshot, meta);
            write_universe_csv(p.assets(), dir + "/" + artifact::kUniverse, meta);
            return p;
        });

        auto detected = stage("detect", [&] {
            DetectOutput out = detect_panel(panel, calendar, config.detector, config.threads);
            write_events_csv(out.events, dir + "/" + artifact::kEvents, meta);
            return out;
        });

        auto grouped = stage("cojump", [&] {
            const auto filtered = filter_direction(detected.events, config.direction);
            auto cocrashes = group_events(filtered);
            auto table = build_frequency_table(cocrashes, panel.assets());
            write_cojump_outputs(cocrashes, table, meta, dir);
            return std::make_pair(std::move(cocrashes), std::move(table));
        });
        const auto& cocrashes = grouped.first;
        const auto& table = grouped.second;

        auto curves = stage("rank", [&] {
            auto c = correlation_curves(table);
            write_rank_outputs(c, config, dir);
            return c;
        });

        stage("null", [&] {
            const SignificanceOutput sig = compute_significance(table, curves, config);
            write_significance_outputs(sig, config, dir);
            return 0;
        });

        stage("liquidity", [&] {
            write_liquidity_outputs(panel, cocrashes, table, config, dir);
            return 0;
        });

        std::vector<std::string> notes;
        for (const auto& skipped : detected.skipped_assets)
            notes.push_back("skipped asset (insufficient data): " + skipped);
        write_manifest(dir, config.config_hash(), config.seed, {config.input_path}, notes);
    });
    result.manifest_path = config.output_dir + "/" + artifact::kManifest;
    return result;
}

std::string plan_canonical_text(const SimulationPlan& plan) {
    KeyValueConfig canon;
    canon.set("n_assets", std::to_string(plan.n_assets));
    canon.set("n_weeks", std::to_string(plan.n_weeks));
    canon.set("base_vol", format_double(plan.base_vol));
    canon.set("start_day", std::to_string(plan.start_day));
    canon.set("session_open", std::to_string(plan.session_open));
    canon.set("session_close", std::to_string(plan.session_close));
    std::string holidays;
    for (const auto h : plan.holidays) holidays += std::to_string(h) + ";";
    canon.set("holidays", holidays);
    canon.set("periodicity_open_mult", format_double(plan.periodicity_open_mult));
    canon.set("periodicity_close_mult", format_double(plan.periodicity_close_mult));
    canon.set("systemic_count", std::to_string(plan.systemic_count));
    canon.set("fragile_count", std::to_string(plan.fragile_count));
    canon.set("jump_magnitude", format_double(plan.jump_magnitude));
    canon.set("jump_direction", std::to_string(plan.jump_direction));
    canon.set("member_weight_decay", format_double(plan.member_weight_decay));
    canon.set("fragile_dtv_band", format_double(plan.fragile_dtv_band));
    canon.set("auto_events_per_size", std::to_string(plan.auto_events_per_size));
    canon.set("auto_min_size", std::to_string(plan.auto_min_size));
    canon.set("auto_max_size", std::to_string(plan.auto_max_size));
    canon.set("auto_threshold", std::to_string(plan.auto_threshold));
    canon.set("seed", std::to_string(plan.seed));
    std::string events;
    for (const auto& ev : plan.explicit_events)
        events += std::to_string(ev.timestamp) + ":" + std::to_string(ev.size) + ":" +
                  (ev.regime == Regime::systemic ? "s" : "f") + ";";
    canon.set("events", events);
    return canon.canonical_text();
}

PipelineResult run_simulate(const SimulationPlan& plan, const std::string& output_dir,
                            int threads) {
    const std::string meta =
        "config_hash=" + fnv1a_hex(plan_canonical_text(plan)) + " seed=" +
        std::to_string(plan.seed);
    PipelineResult result;
    result.artifacts = with_quarantine(output_dir, [&](const std::string& dir) {
        stage("simulate", [&] {
            const SimulationResult sim = simulate(plan, threads);
            write_panel_snapshot(sim.panel, dir + "/" + artifact::kPanelSnapshot, meta);
            write_universe_csv(sim.panel.assets(), dir + "/" + artifact::kUniverse, meta);
            write_ground_truth(sim.truth, dir + "/" + artifact::kGroundTruth, meta);
            return 0;
        });
        write_manifest(dir, fnv1a_hex(plan_canonical_text(plan)), plan.seed, {}, {});
    });
    result.manifest_path = output_dir + "/" + artifact::kManifest;
    return result;
}

PipelineResult run_report(const std::string& output_dir) {
    return stage("report", [&]() -> PipelineResult {
        const std::string manifest_path = output_dir + "/" + artifact::kManifest;
        const nlohmann::json manifest = nlohmann::json::parse(read_file(manifest_path));

        static const std::vector<std::pair<const char*, const char*>> kFigureMap = {
            {artifact::kSizeDistribution, "crash size distribution f(m) and f(M>=m)"},
            {artifact::kRankCorrCurves, "cross-size rank correlation curves"},
            {artifact::kSteadyState, "steady-state mean correlation by base size"},
            {artifact::kSignificance, "null-model significance of the steady state"},
            {artifact::kDtvBySize, "crash-weighted dollar traded volume by size"},
            {artifact::kVolFreqCorr, "volume vs crash-frequency correlation by size"},
            {artifact::kLiquidFraction, "fraction of crashes touching the top-k liquid set"},
        };

        std::string report;
        report += "cocrash report\n";
        report += "config_hash: " + manifest.at("config_hash").get<std::string>() + "\n";
        report += "seed: " + std::to_string(manifest.at("seed").get<std::uint64_t>()) + "\n\n";
        bool all_ok = true;
        for (const auto& entry : manifest.at("artifacts")) {
            const std::string name = entry.at("file").get<std::string>();
            const std::string want = entry.at("fnv1a").get<std::string>();
            std::string status = "ok";
            try {
                if (fnv1a_hex(read_file(output_dir + "/" + name)) != want) status = "HASH MISMATCH";
            } catch (const std::exception&) {
                status = "MISSING";
            }
            if (status != "ok") all_ok = false;
            report += name + ": " + status + "\n";
        }
        report += "\nfigure-ready artifacts:\n";
        for (const auto& [file, what] : kFigureMap) report += std::string(file) + " -> " + what + "\n";

        std::ofstream out(output_dir + "/report.txt", std::ios::binary);
        if (!out) throw DataError("cannot write report.txt");
        out << report;
        out.close();
        if (!all_ok) throw DataError("artifact verification failed; see report.txt");

        PipelineResult result;
        result.artifacts = {"report.txt"};
        result.manifest_path = manifest_path;
        return result;
    });
}

}  // namespace cocrash
