#include "cocrash/rank_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cocrash/error.hpp"

namespace cocrash {

std::vector<double> increasing_average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

std::vector<double> decreasing_average_ranks(const std::vector<double>& values) {
    std::vector<double> negated(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) negated[i] = -values[i];
    return increasing_average_ranks(negated);
}

RankVector rank_assets(const CrashFrequencyTable& table, std::size_t m) {
    if (m == 0 || m > table.max_size())
        throw RangeError("rank_assets: size " + std::to_string(m) + " exceeds max size " +
                         std::to_string(table.max_size()));
    RankVector rv;
    rv.size_m = m;
    const std::vector<double> f = table.frequencies(m);
    rv.ranks = decreasing_average_ranks(f);
    for (const double v : f) rv.participating += v > 0.0;
    return rv;
}

std::optional<double> try_spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) return std::nullopt;
    const std::vector<double> ra = increasing_average_ranks(a);
    const std::vector<double> rb = increasing_average_ranks(b);
    const std::size_t n = ra.size();

    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_a += ra[i];
        mean_b += rb[i];
    }
    mean_a /= static_cast<double>(n);
    mean_b /= static_cast<double>(n);

    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = ra[i] - mean_a;
        const double db = rb[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0) return std::nullopt;
    return cov / std::sqrt(var_a * var_b);
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw DataError("spearman: length mismatch " + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
    if (a.size() < 2) throw DataError("spearman: need at least 2 observations");
    const auto rho = try_spearman(a, b);
    if (!rho) throw DataError("spearman undefined: constant input vector");
    return *rho;
}

std::vector<CorrelationCurve> correlation_curves(const CrashFrequencyTable& table) {
    const std::size_t max_size = table.max_size();
    std::vector<std::optional<RankVector>> ranks(max_size + 1);
    for (std::size_t m = 1; m <= max_size; ++m)
        if (table.events_at(m) > 0) ranks[m] = rank_assets(table, m);

    std::vector<CorrelationCurve> curves;
    for (std::size_t m = 1; m <= max_size; ++m) {
        if (!ranks[m]) continue;  // zero-event base sizes are skipped
        CorrelationCurve curve;
        curve.base_size = m;
        curve.rho_by_tau.resize(max_size - m);
        for (std::size_t tau = 1; tau + m <= max_size; ++tau) {
            const auto& target = ranks[m + tau];
            curve.rho_by_tau[tau - 1] =
                target ? try_spearman(ranks[m]->ranks, target->ranks) : std::nullopt;
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

std::optional<SteadyState> steady_state(const CorrelationCurve& curve, int tau_lo, int tau_hi) {
    if (tau_lo < 1 || tau_hi < tau_lo) throw ConfigError("bad steady-state window");
    SteadyState ss;
    ss.base_size = curve.base_size;
    double sum = 0.0;
    for (int tau = tau_lo; tau <= tau_hi; ++tau) {
        const std::size_t idx = static_cast<std::size_t>(tau - 1);
        if (idx >= curve.rho_by_tau.size()) {
            ss.truncated = true;
            break;
        }
        if (!curve.rho_by_tau[idx]) continue;  // gap
        sum += *curve.rho_by_tau[idx];
        ++ss.n_points;
    }
    if (ss.n_points == 0) return std::nullopt;
    ss.mean_rho = sum / ss.n_points;
    return ss;
}

}  // namespace cocrash
