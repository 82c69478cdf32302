#include "cocrash/jump_detector.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cocrash/error.hpp"

namespace cocrash {

namespace {

constexpr double kC = 0.79788456080286535588;  // sqrt(2/pi)
constexpr double kPi = 3.14159265358979323846;

double median_inplace(std::vector<double>& v) {
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (n % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
    return 0.5 * (v[mid - 1] + hi);
}

// Gaussian-consistent robust scale: 1.4826 * MAD about the median.
double robust_scale(const std::vector<double>& values) {
    std::vector<double> work(values);
    const double med = median_inplace(work);
    for (double& x : work) x = std::fabs(x - med);
    return 1.4826 * median_inplace(work);
}

// Per-day diffusive scale from adjacent absolute-return products; falls back
// to MAD when the day has too few pairs.
std::optional<double> day_scale(const std::vector<double>& day_returns) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 1; i < day_returns.size(); ++i) {
        sum += std::fabs(day_returns[i]) * std::fabs(day_returns[i - 1]);
        ++count;
    }
    double scale = 0.0;
    if (count >= 4) {
        scale = std::sqrt(sum / static_cast<double>(count) * (kPi / 2.0));
    } else if (day_returns.size() >= 2) {
        scale = robust_scale(day_returns);
    }
    if (scale > 0.0) return scale;
    return std::nullopt;
}

}  // namespace

DetectionThresholds compute_thresholds(std::size_t n_tested, double alpha) {
    DetectionThresholds th;
    const double n = static_cast<double>(n_tested);
    const double root = std::sqrt(2.0 * std::log(n));
    th.c_n = root / kC - (std::log(kPi) + std::log(std::log(n))) / (2.0 * kC * root);
    th.s_n = 1.0 / (kC * root);
    th.beta_star = -std::log(-std::log(1.0 - alpha));
    th.l_threshold = th.c_n + th.s_n * th.beta_star;
    return th;
}

std::optional<double> bipower_scale(std::span<const double> returns, std::size_t i, int window_k) {
    const std::size_t k = static_cast<std::size_t>(window_k);
    if (window_k < 8) throw ConfigError("window_k must be >= 8");
    if (i >= returns.size()) throw RangeError("index out of range");
    if (i + 1 < k) throw RangeError("bipower window needs index >= window_k - 1");

    double sum = 0.0;
    int used = 0;
    for (std::size_t j = i - k + 2; j < i; ++j) {
        const double a = returns[j];
        const double b = returns[j - 1];
        if (is_missing(a) || is_missing(b)) continue;
        sum += std::fabs(a) * std::fabs(b);
        ++used;
    }
    const int needed = std::min(window_k - 2, 8);
    if (used < needed) return std::nullopt;
    return std::sqrt(sum / static_cast<double>(used) * (kPi / 2.0));
}

namespace {

// MAD-based factors carry sizable sampling noise at realistic sample counts
// (relative sd ~ 1.166/sqrt(n)). Shrink each factor toward 1 by the usual
// signal/(signal+noise) ratio so a flat series yields flat factors while real
// periodicity passes through almost untouched.
void shrink_factors(std::vector<double>& factors, const std::vector<double>& obs_counts) {
    double total_dev = 0.0, mean_noise = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (obs_counts[i] <= 0.0) continue;
        total_dev += (factors[i] - 1.0) * (factors[i] - 1.0);
        mean_noise += factors[i] * factors[i] * 1.36 / obs_counts[i];
        ++used;
    }
    if (used == 0) return;
    total_dev /= static_cast<double>(used);
    mean_noise /= static_cast<double>(used);
    if (total_dev <= 0.0) return;
    const double kappa = std::max(0.0, total_dev - mean_noise) / total_dev;
    for (std::size_t i = 0; i < factors.size(); ++i)
        if (obs_counts[i] > 0.0) factors[i] = 1.0 + kappa * (factors[i] - 1.0);
}

}  // namespace

PeriodicityProfile estimate_periodicity(const ReturnSeries& series,
                                        const SessionCalendar& calendar,
                                        const DetectorConfig& config) {
    const int mps = calendar.minutes_per_session();

    // Group observations by session day, keeping intra-day order.
    std::map<std::int64_t, std::vector<std::pair<int, double>>> by_day;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (is_missing(series.returns[i])) continue;
        const Minutes t = series.timestamps[i];
        calendar.week_bucket(t);  // validates session membership
        by_day[day_index(t)].push_back({minute_of_day(t) - calendar.open_minute(),
                                        series.returns[i]});
    }
    if (by_day.size() < 20)
        throw ConfigError("periodicity estimation needs >= 4 full weeks (20 session days), got " +
                          std::to_string(by_day.size()));

    // Standardize each day by its own diffusive scale, then bucket by
    // (day of week, minute of session).
    std::vector<std::vector<double>> by_dow(5);
    std::vector<std::vector<double>> by_minute(static_cast<std::size_t>(mps));
    for (const auto& [day, obs] : by_day) {
        std::vector<double> day_returns;
        day_returns.reserve(obs.size());
        for (const auto& [minute, r] : obs) day_returns.push_back(r);
        const auto scale = day_scale(day_returns);
        if (!scale) continue;
        const int dow = static_cast<int>(((day + 3) % 7 + 7) % 7);
        for (const auto& [minute, r] : obs) {
            const double x = r / *scale;
            by_dow[static_cast<std::size_t>(dow)].push_back(x);
            by_minute[static_cast<std::size_t>(minute)].push_back(x);
        }
    }

    PeriodicityProfile profile;
    profile.bucket_count = calendar.buckets_per_week();

    std::vector<double> dow_factor(5, 1.0);
    std::vector<double> dow_obs(5, 0.0);
    for (std::size_t w = 0; w < 5; ++w) {
        if (by_dow[w].size() >= 5) {
            const double s = robust_scale(by_dow[w]);
            if (s > 0.0) {
                dow_factor[w] = s;
                dow_obs[w] = static_cast<double>(by_dow[w].size());
            }
        } else {
            ++profile.fallback_buckets;
        }
    }
    shrink_factors(dow_factor, dow_obs);

    // Smoothed minute-of-session factor: pool +-halfwidth neighboring minutes
    // (same clock time across all days of the week).
    const int h = std::max(0, config.periodicity_halfwidth);
    std::vector<double> minute_factor(static_cast<std::size_t>(mps), 1.0);
    std::vector<double> minute_obs(static_cast<std::size_t>(mps), 0.0);
    std::vector<double> pool;
    for (int m = 0; m < mps; ++m) {
        pool.clear();
        const int lo = std::max(0, m - h);
        const int hi = std::min(mps - 1, m + h);
        for (int j = lo; j <= hi; ++j)
            pool.insert(pool.end(), by_minute[static_cast<std::size_t>(j)].begin(),
                        by_minute[static_cast<std::size_t>(j)].end());
        if (pool.size() >= 5) {
            const double s = robust_scale(pool);
            if (s > 0.0) {
                minute_factor[static_cast<std::size_t>(m)] = s;
                // neighboring pools overlap; count distinct observations
                minute_obs[static_cast<std::size_t>(m)] = static_cast<double>(pool.size());
            }
        } else {
            ++profile.fallback_buckets;
        }
    }
    shrink_factors(minute_factor, minute_obs);

    profile.bucket_factors.resize(static_cast<std::size_t>(profile.bucket_count));
    for (int w = 0; w < 5; ++w)
        for (int m = 0; m < mps; ++m)
            profile.bucket_factors[static_cast<std::size_t>(w * mps + m)] =
                dow_factor[static_cast<std::size_t>(w)] * minute_factor[static_cast<std::size_t>(m)];

    double mean_square = 0.0;
    for (const double f : profile.bucket_factors) mean_square += f * f;
    mean_square /= static_cast<double>(profile.bucket_factors.size());
    const double norm = std::sqrt(mean_square);
    for (double& f : profile.bucket_factors) f /= norm;
    return profile;
}

ReturnSeries deseasonalize(const ReturnSeries& series, const PeriodicityProfile& profile,
                           const SessionCalendar& calendar) {
    ReturnSeries out;
    out.asset_id = series.asset_id;
    out.timestamps = series.timestamps;
    out.returns.resize(series.returns.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double r = series.returns[i];
        if (is_missing(r)) {
            out.returns[i] = r;
            continue;
        }
        const int bucket = calendar.week_bucket(series.timestamps[i]);
        if (bucket >= profile.bucket_count)
            throw ConfigError("bucket " + std::to_string(bucket) + " outside profile");
        out.returns[i] = r / profile.factor_for(bucket);
    }
    return out;
}

std::vector<JumpEvent> detect_jumps(const ReturnSeries& series, const DetectorConfig& config,
                                    const std::vector<double>* raw_returns) {
    const std::size_t n = series.size();
    const std::size_t k = static_cast<std::size_t>(config.window_k);
    if (config.window_k < 8) throw ConfigError("window_k must be >= 8");
    if (!(config.alpha > 0.0 && config.alpha < 1.0))
        throw ConfigError("alpha must be in (0, 1)");
    if (n < k + 1)
        throw ConfigError("series too short: need at least " + std::to_string(k + 1) +
                          " returns, got " + std::to_string(n));
    std::size_t usable = 0;
    for (const double r : series.returns) usable += !is_missing(r);
    if (usable < static_cast<std::size_t>(config.min_observations))
        throw ConfigError("series has " + std::to_string(usable) +
                          " usable returns, min_observations is " +
                          std::to_string(config.min_observations));
    if (raw_returns && raw_returns->size() != n)
        throw ConfigError("raw_returns length mismatch");

    std::vector<std::pair<std::size_t, double>> tested;  // (index, L)
    tested.reserve(n);
    const std::span<const double> r(series.returns);
    for (std::size_t i = k - 1; i < n; ++i) {
        if (is_missing(r[i])) continue;
        const auto sigma = bipower_scale(r, i, config.window_k);
        if (!sigma || *sigma <= 0.0) continue;
        tested.push_back({i, r[i] / *sigma});
    }
    if (tested.size() < 2) return {};

    const DetectionThresholds th = compute_thresholds(tested.size(), config.alpha);
    std::vector<JumpEvent> events;
    for (const auto& [i, l] : tested) {
        if (std::fabs(l) <= th.l_threshold) continue;
        JumpEvent e;
        e.asset_id = series.asset_id;
        e.timestamp = series.timestamps[i];
        e.statistic = l;
        e.direction = l > 0.0 ? 1 : -1;
        e.raw_return = raw_returns ? (*raw_returns)[i] : series.returns[i];
        events.push_back(std::move(e));
    }
    return events;
}

}  // namespace cocrash
