#pragma once

#include <optional>
#include <vector>

#include "cocrash/cojump.hpp"

namespace cocrash {

// Decreasing-order ranks of f_{x,m} over the full universe: rank 1 is the
// most frequent asset; ties (including the zero-frequency block) share their
// average rank.
struct RankVector {
    std::size_t size_m = 0;
    std::vector<double> ranks;  // universe order
    std::size_t participating = 0;  // assets with f_{x,m} > 0
};

// rho(tau) = spearman(ranks at m, ranks at m + tau); nullopt marks a gap
// (target size has no events or a constant rank vector).
struct CorrelationCurve {
    std::size_t base_size = 0;
    std::vector<std::optional<double>> rho_by_tau;  // index tau-1
};

struct SteadyState {
    std::size_t base_size = 0;
    double mean_rho = 0.0;
    int n_points = 0;
    bool truncated = false;  // window clipped by max_size
};

// Average ranks (1-based) of `values` in DECREASING order; ties averaged.
std::vector<double> decreasing_average_ranks(const std::vector<double>& values);

// Average ranks in increasing order, the usual Spearman prestep.
std::vector<double> increasing_average_ranks(const std::vector<double>& values);

RankVector rank_assets(const CrashFrequencyTable& table, std::size_t m);

// Tie-exact Spearman: Pearson correlation of average ranks. Throws DataError
// when either side is constant (correlation undefined).
double spearman(const std::vector<double>& a, const std::vector<double>& b);
std::optional<double> try_spearman(const std::vector<double>& a, const std::vector<double>& b);

// One curve per base size that has events; tau runs to max_size - m.
std::vector<CorrelationCurve> correlation_curves(const CrashFrequencyTable& table);

// Mean of rho(tau) over tau in [lo, hi] (default [2, 20]), skipping gaps.
std::optional<SteadyState> steady_state(const CorrelationCurve& curve, int tau_lo = 2,
                                        int tau_hi = 20);

}  // namespace cocrash
