#include "cocrash/null_model.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "cocrash/error.hpp"
#include "cocrash/parallel.hpp"

namespace cocrash {

ShuffleWeights ShuffleWeights::from_table(const CrashFrequencyTable& table, std::size_t m) {
    ShuffleWeights w;
    w.size_m = m;
    w.weights = table.frequencies(m);
    w.total = std::accumulate(w.weights.begin(), w.weights.end(), 0.0);
    return w;
}

std::vector<std::size_t> weighted_shuffle(const ShuffleWeights& weights, Rng& rng) {
    const std::size_t n = weights.weights.size();
    if (n == 0) throw ConfigError("weighted_shuffle: empty universe");
    for (const double w : weights.weights)
        if (w < 0.0) throw ConfigError("weighted_shuffle: negative weight");

    // Exponential-key trick: sorting by Exp(w) arrival times reproduces
    // successive draws without replacement. Zero-weight entries get an
    // infinite primary key and a uniform secondary key, which lands them
    // after every weighted entry in uniform random order.
    struct Key {
        double primary;
        double secondary;
        std::size_t index;
    };
    std::vector<Key> keys(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        const double w = weights.weights[i];
        double primary;
        if (w > 0.0) {
            double v = u;
            while (v <= 0.0) v = rng.uniform();
            primary = -std::log(v) / w;
        } else {
            primary = std::numeric_limits<double>::infinity();
        }
        keys[i] = {primary, u, i};
    }
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
        if (a.primary != b.primary) return a.primary < b.primary;
        if (a.secondary != b.secondary) return a.secondary < b.secondary;
        return a.index < b.index;
    });
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = keys[i].index;
    return order;
}

NullDistribution build_null(const RankVector& observed, const ShuffleWeights& weights,
                            std::size_t n_samples, std::uint64_t seed, int threads) {
    if (n_samples < 1) throw ConfigError("build_null: n_samples must be >= 1");
    if (observed.ranks.size() != weights.weights.size())
        throw ConfigError("build_null: universe size mismatch");

    NullDistribution null;
    null.size_m = weights.size_m;
    null.seed = seed;
    null.n_samples = n_samples;
    null.uniform_fallback = weights.total == 0.0;

    const std::size_t n_assets = observed.ranks.size();
    std::vector<double> samples(n_samples, std::numeric_limits<double>::quiet_NaN());
    parallel_for(n_samples, threads, [&](std::size_t i) {
        Rng rng(seed, i);
        const std::vector<std::size_t> order = weighted_shuffle(weights, rng);
        std::vector<double> drawn_rank(n_assets);
        for (std::size_t pos = 0; pos < n_assets; ++pos)
            drawn_rank[order[pos]] = static_cast<double>(pos + 1);
        const auto rho = try_spearman(drawn_rank, observed.ranks);
        if (rho) samples[i] = *rho;
    });

    null.samples.reserve(n_samples);
    for (const double s : samples) {
        if (std::isnan(s))
            ++null.gap_count;
        else
            null.samples.push_back(s);
    }
    std::sort(null.samples.begin(), null.samples.end());
    return null;
}

double NullDistribution::quantile_of(double observed) const {
    if (samples.empty()) throw DataError("null distribution has no valid samples");
    const auto lo = std::lower_bound(samples.begin(), samples.end(), observed);
    const auto hi = std::upper_bound(samples.begin(), samples.end(), observed);
    const double below = static_cast<double>(lo - samples.begin());
    const double equal = static_cast<double>(hi - lo);
    return (below + 0.5 * equal) / static_cast<double>(samples.size());
}

double significance(const RankVector& base, const RankVector& target,
                    const NullDistribution& null) {
    if (null.size_m != base.size_m)
        throw ConfigError("null distribution was built for size " + std::to_string(null.size_m) +
                          ", not " + std::to_string(base.size_m));
    const double observed = spearman(target.ranks, base.ranks);
    return null.quantile_of(observed);
}

}  // namespace cocrash
