#pragma once

#include <cstdint>
#include <vector>

#include "cocrash/rank_analysis.hpp"
#include "cocrash/rng.hpp"

namespace cocrash {

// Per-asset sampling weights, proportional to f_{x,m}.
struct ShuffleWeights {
    std::size_t size_m = 0;
    std::vector<double> weights;  // universe order, >= 0
    double total = 0.0;

    static ShuffleWeights from_table(const CrashFrequencyTable& table, std::size_t m);
};

// Sorted Spearman samples between frequency-biased reshuffles and the
// observed ranking, queryable by quantile.
struct NullDistribution {
    std::size_t size_m = 0;
    std::vector<double> samples;  // ascending
    std::uint64_t seed = 0;
    std::size_t n_samples = 0;    // configured draw count
    std::size_t gap_count = 0;    // draws with undefined Spearman
    bool uniform_fallback = false;  // weights were all zero

    double quantile_of(double observed) const;
};

// Draws a full permutation of [0, n): successive weighted draws without
// replacement; zero-weight entries follow all positive-weight entries in
// uniform random order. Implemented by exponential-key sorting, which is
// distribution-equivalent and O(n log n).
std::vector<std::size_t> weighted_shuffle(const ShuffleWeights& weights, Rng& rng);

// D_m: n_samples Spearman values between reshuffled rank vectors (drawn
// position = rank) and the observed ranking. Sample i always uses substream
// i of `seed`, so the result is independent of `threads`.
NullDistribution build_null(const RankVector& observed, const ShuffleWeights& weights,
                            std::size_t n_samples, std::uint64_t seed, int threads = 1);

// Empirical quantile of spearman(target, base) in the null, midpoint
// convention for ties.
double significance(const RankVector& base, const RankVector& target,
                    const NullDistribution& null);

}  // namespace cocrash
