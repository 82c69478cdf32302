#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cocrash/config.hpp"
#include "cocrash/cojump.hpp"
#include "cocrash/jump_detector.hpp"
#include "cocrash/liquidity.hpp"
#include "cocrash/market_data.hpp"
#include "cocrash/null_model.hpp"
#include "cocrash/rank_analysis.hpp"
#include "cocrash/synthetic.hpp"
#include "cocrash/time_grid.hpp"

namespace cocrash {

// Artifact file names shared by all stages.
namespace artifact {
inline constexpr const char* kPanelSnapshot = "panel_snapshot.csv";
inline constexpr const char* kUniverse = "universe.csv";
inline constexpr const char* kEvents = "events.csv";
inline constexpr const char* kCoCrashEvents = "cocrash_events.csv";
inline constexpr const char* kCrashFrequency = "crash_frequency.csv";
inline constexpr const char* kSizeDistribution = "size_distribution.csv";
inline constexpr const char* kRankCorrCurves = "rank_corr_curves.csv";
inline constexpr const char* kSteadyState = "steady_state.csv";
inline constexpr const char* kSignificance = "significance.csv";
inline constexpr const char* kSignificanceByTau = "significance_by_tau.csv";
inline constexpr const char* kDtvBySize = "dtv_by_size.csv";
inline constexpr const char* kVolFreqCorr = "vol_freq_corr.csv";
inline constexpr const char* kLiquidFraction = "liquid_fraction.csv";
inline constexpr const char* kGroundTruth = "ground_truth.csv";
inline constexpr const char* kManifest = "manifest.json";
}  // namespace artifact

struct RunConfig {
    std::string input_path;
    std::string output_dir = "out";
    std::string session_open = "09:30";
    std::string session_close = "16:00";
    std::vector<std::string> holidays;
    DetectorConfig detector;
    std::string direction = "both";  // both | down | up
    int steady_lo = 2;
    int steady_hi = 20;
    std::size_t null_samples = 100000;
    std::size_t top_k = 20;
    std::size_t vol_corr_shuffles = 10000;
    std::uint64_t seed = 0;
    int threads = 0;

    static RunConfig from_config(const KeyValueConfig& cfg);

    SessionCalendar calendar() const;
    // Hash over every analysis-relevant key; threads and output location are
    // excluded so reruns stay byte-identical wherever and however they run.
    std::string config_hash() const;
    std::string meta_comment() const;

  private:
    KeyValueConfig raw_;
};

// Deterministic sub-seed for a named pipeline component.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

// Carries the stage name so the CLI can map failures to exit codes.
class StageFailure : public Error {
  public:
    StageFailure(std::string stage_name, const std::string& msg)
        : Error("stage " + stage_name + ": " + msg), stage(std::move(stage_name)) {}
    std::string stage;
};

// Runs `work` against <output>/.partial, then moves every produced file into
// <output>. On failure the partial directory is left behind as quarantine and
// nothing reaches <output>. Returns the sorted list of finalized files.
std::vector<std::string> with_quarantine(const std::string& output_dir,
                                         const std::function<void(const std::string&)>& work);

// Renders plan fields canonically (for hashing simulate outputs).
std::string plan_canonical_text(const SimulationPlan& plan);

// --- Stage computations (pure, no file IO) ---------------------------------

struct DetectOutput {
    std::vector<JumpEvent> events;          // asset order, then time
    std::vector<std::string> skipped_assets;  // too little data to test
};

DetectOutput detect_panel(const PricePanel& panel, const SessionCalendar& calendar,
                          const DetectorConfig& config, int threads);

std::vector<JumpEvent> filter_direction(const std::vector<JumpEvent>& events,
                                        const std::string& direction);

struct SignificanceRow {
    std::size_t m = 0;
    double observed_rho = 0.0;
    double quantile = 0.0;
};

struct SignificanceByTauRow {
    std::size_t m = 0;
    std::size_t tau = 0;
    double observed_rho = 0.0;
    double quantile = 0.0;
};

struct SignificanceOutput {
    std::vector<SignificanceRow> steady;  // per base size, steady-state mean
    std::vector<SignificanceByTauRow> by_tau;
};

SignificanceOutput compute_significance(const CrashFrequencyTable& table,
                                        const std::vector<CorrelationCurve>& curves,
                                        const RunConfig& config);

// --- Artifact IO ------------------------------------------------------------

void write_events_csv(const std::vector<JumpEvent>& events, const std::string& path,
                      const std::string& meta);
std::vector<JumpEvent> load_events_csv(const std::string& path);

void write_universe_csv(const std::vector<std::string>& universe, const std::string& path,
                        const std::string& meta);
std::vector<std::string> load_universe_csv(const std::string& path);

void write_cocrash_events_csv(const std::vector<CoCrashEvent>& events, const std::string& path,
                              const std::string& meta);
std::vector<CoCrashEvent> load_cocrash_events_csv(const std::string& path);

void write_crash_frequency_csv(const CrashFrequencyTable& table, const std::string& path,
                               const std::string& meta);
CrashFrequencyTable load_crash_frequency_csv(const std::string& path,
                                             const std::vector<std::string>& universe);

// Stage artifact bundles (shared by `analyze` and the per-stage subcommands).
void write_cojump_outputs(const std::vector<CoCrashEvent>& cocrashes,
                          const CrashFrequencyTable& table, const std::string& meta,
                          const std::string& dir);
void write_rank_outputs(const std::vector<CorrelationCurve>& curves, const RunConfig& config,
                        const std::string& dir);
void write_significance_outputs(const SignificanceOutput& sig, const RunConfig& config,
                                const std::string& dir);
void write_liquidity_outputs(const PricePanel& panel, const std::vector<CoCrashEvent>& cocrashes,
                             const CrashFrequencyTable& table, const RunConfig& config,
                             const std::string& dir);

// --- Orchestration ----------------------------------------------------------

// Stages run in order; artifacts land in <output>/.partial and move to
// <output> only when the requested stages all succeed. Rerunning a config is
// byte-identical, independent of the thread count.
struct PipelineResult {
    std::vector<std::string> artifacts;  // relative names, sorted
    std::string manifest_path;
};

PipelineResult run_pipeline(const RunConfig& config);

// Simulate a plan into an output directory (panel snapshot + ground truth).
PipelineResult run_simulate(const SimulationPlan& plan, const std::string& output_dir,
                            int threads = 0);

// Verifies the manifest in `output_dir` against the files on disk and writes
// report.txt mapping artifacts to the analyses they back.
PipelineResult run_report(const std::string& output_dir);

}  // namespace cocrash
