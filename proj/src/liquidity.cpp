#include "cocrash/liquidity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cocrash/error.hpp"
#include "cocrash/rank_analysis.hpp"
#include "cocrash/rng.hpp"

namespace cocrash {

LiquidityProfile LiquidityProfile::from_panel(const PricePanel& panel, std::size_t k) {
    LiquidityProfile profile;
    profile.k = k;
    profile.dtv.reserve(panel.n_assets());
    for (const auto& asset : panel.assets())
        profile.dtv.push_back(average_daily_dollar_volume(panel, asset));

    std::vector<std::size_t> order(profile.dtv.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return profile.dtv[a] > profile.dtv[b];
    });
    const std::size_t take = std::min(k, order.size());
    for (std::size_t i = 0; i < take; ++i) profile.top_k_set.insert(order[i]);
    return profile;
}

std::optional<double> crash_weighted_dtv(const CrashFrequencyTable& table,
                                         const LiquidityProfile& profile, std::size_t m) {
    if (profile.dtv.size() != table.universe().size())
        throw ConfigError("liquidity profile does not match the universe");
    const std::uint64_t f_m = table.marginal(m);
    if (f_m == 0) return std::nullopt;
    double weighted = 0.0;
    for (std::size_t x = 0; x < profile.dtv.size(); ++x)
        weighted += static_cast<double>(table.count(x, m)) * profile.dtv[x];
    return weighted / static_cast<double>(f_m);
}

std::optional<VolumeFrequencyCorrelation> volume_frequency_correlation(
    const CrashFrequencyTable& table, const LiquidityProfile& profile, std::size_t m,
    double alpha, std::size_t shuffles, std::uint64_t seed) {
    if (profile.dtv.size() != table.universe().size())
        throw ConfigError("liquidity profile does not match the universe");
    if (profile.dtv.size() < 3) throw ConfigError("need at least 3 assets");

    std::vector<double> freq = table.frequencies(m);
    const auto rho = try_spearman(profile.dtv, freq);
    if (!rho) return std::nullopt;

    // Two-sided permutation test: reshuffle the frequency vector uniformly
    // and count |rho*| >= |rho|.
    std::size_t at_least = 0;
    for (std::size_t i = 0; i < shuffles; ++i) {
        Rng rng(seed, i);
        for (std::size_t j = freq.size(); j > 1; --j)
            std::swap(freq[j - 1], freq[rng.uniform_below(j)]);
        const auto null_rho = try_spearman(profile.dtv, freq);
        if (null_rho && std::fabs(*null_rho) >= std::fabs(*rho)) ++at_least;
    }
    VolumeFrequencyCorrelation out;
    out.rho = *rho;
    out.p_value = (static_cast<double>(at_least) + 1.0) / (static_cast<double>(shuffles) + 1.0);
    out.significant = out.p_value <= alpha;
    return out;
}

std::optional<double> liquid_crash_fraction(const std::vector<CoCrashEvent>& cocrashes,
                                            const CrashFrequencyTable& table,
                                            const LiquidityProfile& profile, std::size_t m) {
    std::size_t events = 0;
    std::size_t touched = 0;
    for (const auto& ev : cocrashes) {
        if (ev.size_m() != m) continue;
        ++events;
        for (const auto& member : ev.members) {
            if (profile.top_k_set.count(table.asset_index(member))) {
                ++touched;
                break;
            }
        }
    }
    if (events == 0) return std::nullopt;
    return static_cast<double>(touched) / static_cast<double>(events);
}

}  // namespace cocrash
