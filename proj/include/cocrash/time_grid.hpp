#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cocrash/error.hpp"

namespace cocrash {

// Timestamps are integer minutes since 1970-01-01 00:00 in exchange-local
// wall time. No timezone arithmetic happens anywhere in the library.
using Minutes = std::int64_t;

constexpr Minutes kMinutesPerDay = 1440;

// Days since 1970-01-01 (Hinnant's civil-date algorithm).
std::int64_t days_from_civil(int year, int month, int day);
void civil_from_days(std::int64_t days, int& year, int& month, int& day);

// 0 = Monday ... 6 = Sunday.
inline int day_of_week(Minutes t) {
    std::int64_t day = t / kMinutesPerDay;
    if (t < 0 && t % kMinutesPerDay != 0) --day;  // floor for pre-epoch times
    return static_cast<int>(((day + 3) % 7 + 7) % 7);
}

inline std::int64_t day_index(Minutes t) {
    std::int64_t day = t / kMinutesPerDay;
    if (t < 0 && t % kMinutesPerDay != 0) --day;
    return day;
}

inline int minute_of_day(Minutes t) {
    return static_cast<int>(t - day_index(t) * kMinutesPerDay);
}

// "YYYY-MM-DD[T ]HH:MM[:SS]"; seconds are truncated to the containing minute.
Minutes parse_iso_minute(const std::string& text);
std::string format_iso_minute(Minutes t);

// "HH:MM" -> minute of day.
int parse_hhmm(const std::string& text);

// "YYYY-MM-DD" -> day index since epoch.
std::int64_t parse_iso_date(const std::string& text);

// Trading-session clock: weekday minutes in [open, close), minus holidays.
class SessionCalendar {
  public:
    SessionCalendar(int open_minute, int close_minute, std::set<std::int64_t> holidays = {});

    static SessionCalendar from_config(const std::string& open_hhmm, const std::string& close_hhmm,
                                       const std::vector<std::string>& holiday_dates);

    bool is_session_minute(Minutes t) const;
    bool is_trading_day(std::int64_t day) const;

    int open_minute() const { return open_minute_; }
    int close_minute() const { return close_minute_; }
    int minutes_per_session() const { return close_minute_ - open_minute_; }
    int buckets_per_week() const { return 5 * minutes_per_session(); }

    // Minute-of-week bucket in [0, buckets_per_week). Throws ConfigError for
    // non-session minutes.
    int week_bucket(Minutes t) const;

    // All session minutes in day order starting at `start_day`, spanning
    // `n_weeks` calendar weeks. `start_day` is a day index since epoch.
    std::vector<Minutes> session_grid(std::int64_t start_day, int n_weeks) const;

    const std::set<std::int64_t>& holidays() const { return holidays_; }

  private:
    int open_minute_;
    int close_minute_;
    std::set<std::int64_t> holidays_;
};

}  // namespace cocrash
