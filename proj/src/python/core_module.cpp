// cocrash._core: python bindings over the analysis library. Lists of floats
// in, plain python structures out; NaN marks missing returns, as in the CSV
// formats.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "cocrash/pipeline.hpp"

namespace py = pybind11;
using namespace cocrash;

namespace {

ReturnSeries make_series(const std::vector<double>& returns,
                         const std::optional<std::vector<Minutes>>& timestamps,
                         const std::string& asset_id) {
    ReturnSeries s;
    s.asset_id = asset_id;
    s.returns = returns;
    if (timestamps) {
        if (timestamps->size() != returns.size())
            throw ConfigError("timestamps and returns must have equal length");
        s.timestamps = *timestamps;
    } else {
        s.timestamps.resize(returns.size());
        for (std::size_t i = 0; i < returns.size(); ++i)
            s.timestamps[i] = static_cast<Minutes>(i);
    }
    return s;
}

CrashFrequencyTable table_from_events(
    const std::vector<std::pair<Minutes, std::vector<std::string>>>& events,
    const std::vector<std::string>& universe) {
    std::vector<CoCrashEvent> cocrashes;
    cocrashes.reserve(events.size());
    for (const auto& [timestamp, members] : events) {
        CoCrashEvent ev;
        ev.timestamp = timestamp;
        ev.members = members;
        std::sort(ev.members.begin(), ev.members.end());
        cocrashes.push_back(std::move(ev));
    }
    return build_frequency_table(cocrashes, universe);
}

std::vector<CoCrashEvent> events_from_pairs(
    const std::vector<std::pair<Minutes, std::vector<std::string>>>& events) {
    std::vector<CoCrashEvent> cocrashes;
    for (const auto& [timestamp, members] : events) {
        CoCrashEvent ev;
        ev.timestamp = timestamp;
        ev.members = members;
        std::sort(ev.members.begin(), ev.members.end());
        cocrashes.push_back(std::move(ev));
    }
    return cocrashes;
}

LiquidityProfile profile_from_dtv(const std::vector<double>& dtv, std::size_t k) {
    LiquidityProfile profile;
    profile.dtv = dtv;
    profile.k = k;
    std::vector<std::size_t> order(dtv.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return dtv[a] > dtv[b]; });
    for (std::size_t i = 0; i < std::min(k, order.size()); ++i)
        profile.top_k_set.insert(order[i]);
    return profile;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "co-jump detection and systemic crash analysis";

    py::register_exception<Error>(m, "CocrashError");

    py::class_<JumpEvent>(m, "JumpEvent")
        .def_readonly("asset_id", &JumpEvent::asset_id)
        .def_readonly("timestamp", &JumpEvent::timestamp)
        .def_readonly("statistic", &JumpEvent::statistic)
        .def_readonly("direction", &JumpEvent::direction)
        .def_readonly("raw_return", &JumpEvent::raw_return)
        .def("__repr__", [](const JumpEvent& e) {
            return "JumpEvent(" + e.asset_id + ", t=" + std::to_string(e.timestamp) +
                   ", dir=" + std::to_string(e.direction) + ")";
        });

    py::class_<SessionCalendar>(m, "SessionCalendar")
        .def(py::init([](const std::string& open, const std::string& close,
                         const std::vector<std::string>& holidays) {
                 return SessionCalendar::from_config(open, close, holidays);
             }),
             py::arg("open") = "09:30", py::arg("close") = "16:00",
             py::arg("holidays") = std::vector<std::string>{})
        .def("is_session_minute", &SessionCalendar::is_session_minute)
        .def("minutes_per_session", &SessionCalendar::minutes_per_session)
        .def("session_grid", [](const SessionCalendar& cal, const std::string& start_date,
                                int weeks) { return cal.session_grid(parse_iso_date(start_date), weeks); },
             py::arg("start_date"), py::arg("weeks"));

    m.def("parse_iso_minute", &parse_iso_minute);
    m.def("format_iso_minute", &format_iso_minute);

    // --- jump detection -----------------------------------------------------
    m.def(
        "detect_jumps",
        [](const std::vector<double>& returns, double alpha, int window_k, int min_observations,
           const std::optional<std::vector<Minutes>>& timestamps) {
            DetectorConfig config;
            config.alpha = alpha;
            config.window_k = window_k;
            config.min_observations = min_observations;
            return detect_jumps(make_series(returns, timestamps, "PY"), config);
        },
        py::arg("returns"), py::arg("alpha") = 0.05, py::arg("window_k") = 270,
        py::arg("min_observations") = 300, py::arg("timestamps") = std::nullopt,
        "Lee-Mykland style jump detection on one return series (NaN = missing).");

    m.def(
        "bipower_scale",
        [](const std::vector<double>& returns, std::size_t i, int window_k)
            -> std::optional<double> { return bipower_scale(returns, i, window_k); },
        py::arg("returns"), py::arg("i"), py::arg("window_k") = 270);

    m.def(
        "estimate_periodicity",
        [](const std::vector<Minutes>& timestamps, const std::vector<double>& returns,
           const SessionCalendar& calendar, int halfwidth) {
            DetectorConfig config;
            config.periodicity_halfwidth = halfwidth;
            return estimate_periodicity(make_series(returns, timestamps, "PY"), calendar, config)
                .bucket_factors;
        },
        py::arg("timestamps"), py::arg("returns"), py::arg("calendar"),
        py::arg("halfwidth") = 10,
        "Intraweek bucket factors (minute-of-week order, mean square 1).");

    m.def(
        "deseasonalize",
        [](const std::vector<Minutes>& timestamps, const std::vector<double>& returns,
           const std::vector<double>& factors, const SessionCalendar& calendar) {
            PeriodicityProfile profile;
            profile.bucket_factors = factors;
            profile.bucket_count = static_cast<int>(factors.size());
            return deseasonalize(make_series(returns, timestamps, "PY"), profile, calendar)
                .returns;
        },
        py::arg("timestamps"), py::arg("returns"), py::arg("factors"), py::arg("calendar"));

    // --- ranks and correlation ----------------------------------------------
    m.def("spearman", &spearman, py::arg("a"), py::arg("b"),
          "Tie-exact Spearman correlation (Pearson on average ranks).");
    m.def("average_ranks", &increasing_average_ranks, py::arg("values"));
    m.def("decreasing_ranks", &decreasing_average_ranks, py::arg("values"));

    // --- co-jump accounting ---------------------------------------------------
    py::class_<CrashFrequencyTable>(m, "CrashTable")
        .def(py::init(&table_from_events), py::arg("events"), py::arg("universe"),
             "events: list of (timestamp, [member symbols]) pairs")
        .def_property_readonly("max_size", &CrashFrequencyTable::max_size)
        .def_property_readonly("universe", &CrashFrequencyTable::universe)
        .def("count",
             [](const CrashFrequencyTable& t, const std::string& symbol, std::size_t m) {
                 return t.count(t.asset_index(symbol), m);
             })
        .def("marginal", &CrashFrequencyTable::marginal)
        .def("events_at", &CrashFrequencyTable::events_at)
        .def("asset_total",
             [](const CrashFrequencyTable& t, const std::string& symbol) {
                 return t.asset_total(t.asset_index(symbol));
             })
        .def("ranks",
             [](const CrashFrequencyTable& t, std::size_t m) { return rank_assets(t, m).ranks; })
        .def("size_distribution", [](const CrashFrequencyTable& t) {
            const SizeDistribution dist = size_distribution(t);
            return py::make_tuple(dist.events_by_size, dist.tail_cumulative);
        });

    // --- null model -----------------------------------------------------------
    py::class_<NullDistribution>(m, "NullDistribution")
        .def_readonly("samples", &NullDistribution::samples)
        .def_readonly("seed", &NullDistribution::seed)
        .def_readonly("gap_count", &NullDistribution::gap_count)
        .def_readonly("uniform_fallback", &NullDistribution::uniform_fallback)
        .def("quantile_of", &NullDistribution::quantile_of);

    m.def(
        "weighted_permutation",
        [](const std::vector<double>& weights, std::uint64_t seed) {
            ShuffleWeights sw;
            sw.weights = weights;
            for (const double w : weights) sw.total += w;
            Rng rng(seed);
            return weighted_shuffle(sw, rng);
        },
        py::arg("weights"), py::arg("seed"),
        "One frequency-biased permutation (draw order, without replacement).");

    m.def(
        "build_null",
        [](const std::vector<double>& observed_ranks, const std::vector<double>& weights,
           std::size_t n_samples, std::uint64_t seed, int threads) {
            RankVector rv;
            rv.ranks = observed_ranks;
            ShuffleWeights sw;
            sw.weights = weights;
            for (const double w : weights) sw.total += w;
            return build_null(rv, sw, n_samples, seed, threads);
        },
        py::arg("observed_ranks"), py::arg("weights"), py::arg("n_samples") = 100000,
        py::arg("seed") = 0, py::arg("threads") = 1);

    // --- liquidity -------------------------------------------------------------
    m.def(
        "crash_weighted_dtv",
        [](const CrashFrequencyTable& table, const std::vector<double>& dtv, std::size_t m)
            -> std::optional<double> {
            return crash_weighted_dtv(table, profile_from_dtv(dtv, 20), m);
        },
        py::arg("table"), py::arg("dtv"), py::arg("m"));

    m.def(
        "volume_frequency_correlation",
        [](const CrashFrequencyTable& table, const std::vector<double>& dtv, std::size_t m,
           double alpha, std::size_t shuffles,
           std::uint64_t seed) -> std::optional<std::pair<double, bool>> {
            const auto r = volume_frequency_correlation(table, profile_from_dtv(dtv, 20), m,
                                                        alpha, shuffles, seed);
            if (!r) return std::nullopt;
            return std::make_pair(r->rho, r->significant);
        },
        py::arg("table"), py::arg("dtv"), py::arg("m"), py::arg("alpha") = 0.05,
        py::arg("shuffles") = 10000, py::arg("seed") = 0);

    m.def(
        "liquid_crash_fraction",
        [](const std::vector<std::pair<Minutes, std::vector<std::string>>>& events,
           const CrashFrequencyTable& table, const std::vector<double>& dtv, std::size_t k,
           std::size_t m) -> std::optional<double> {
            return liquid_crash_fraction(events_from_pairs(events), table,
                                         profile_from_dtv(dtv, k), m);
        },
        py::arg("events"), py::arg("table"), py::arg("dtv"), py::arg("k"), py::arg("m"));

    // --- pipeline ----------------------------------------------------------------
    m.def(
        "simulate",
        [](const std::string& plan_path, const std::string& output_dir, int threads) {
            const SimulationPlan plan = SimulationPlan::from_config(KeyValueConfig::load(plan_path));
            return run_simulate(plan, output_dir, threads).artifacts;
        },
        py::arg("plan_path"), py::arg("output_dir"), py::arg("threads") = 0,
        "Generate a synthetic panel + ground truth; returns the artifact list.");

    m.def(
        "analyze",
        [](const std::string& input, const std::string& output_dir,
           const std::map<std::string, std::string>& options) {
            KeyValueConfig cfg;
            for (const auto& [key, value] : options) cfg.set(key, value);
            cfg.set("input", input);
            cfg.set("output", output_dir);
            return run_pipeline(RunConfig::from_config(cfg)).artifacts;
        },
        py::arg("input"), py::arg("output_dir"),
        py::arg("options") = std::map<std::string, std::string>{},
        "Run the full pipeline; options are run-config keys as strings.");
}
