#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cocrash/cojump.hpp"
#include "cocrash/market_data.hpp"

namespace cocrash {

// Average daily dollar volume per asset plus the top-k most traded set.
struct LiquidityProfile {
    std::vector<double> dtv;  // universe order
    std::set<std::size_t> top_k_set;
    std::size_t k = 20;

    static LiquidityProfile from_panel(const PricePanel& panel, std::size_t k = 20);
};

// Frequency-weighted mean DTV over assets crashing at size m; nullopt when
// f_m == 0.
std::optional<double> crash_weighted_dtv(const CrashFrequencyTable& table,
                                         const LiquidityProfile& profile, std::size_t m);

struct VolumeFrequencyCorrelation {
    double rho = 0.0;
    bool significant = false;
    double p_value = 1.0;
};

// Spearman between per-asset DTV and f_{x,m} across the whole universe;
// two-sided permutation test with `shuffles` uniform reshuffles of the
// frequency vector. nullopt when the correlation is undefined.
std::optional<VolumeFrequencyCorrelation> volume_frequency_correlation(
    const CrashFrequencyTable& table, const LiquidityProfile& profile, std::size_t m,
    double alpha = 0.05, std::size_t shuffles = 10000, std::uint64_t seed = 0);

// Fraction of size-m events whose members intersect the top-k set; nullopt
// when no size-m events exist.
std::optional<double> liquid_crash_fraction(const std::vector<CoCrashEvent>& cocrashes,
                                            const CrashFrequencyTable& table,
                                            const LiquidityProfile& profile, std::size_t m);

}  // namespace cocrash
