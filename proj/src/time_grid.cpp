#include "cocrash/time_grid.hpp"

#include <cstdio>

namespace cocrash {

std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, int& month, int& day) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    year = static_cast<int>(y + (m <= 2));
    month = static_cast<int>(m);
    day = static_cast<int>(d);
}

namespace {

int parse_int_field(const std::string& text, std::size_t pos, std::size_t len) {
    int value = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (i >= text.size() || text[i] < '0' || text[i] > '9')
            throw ParseError("bad timestamp '" + text + "'", 0);
        value = value * 10 + (text[i] - '0');
    }
    return value;
}

}  // namespace

Minutes parse_iso_minute(const std::string& text) {
    // YYYY-MM-DDTHH:MM with optional :SS, 'T' or space separator
    if (text.size() < 16 || text[4] != '-' || text[7] != '-' ||
        (text[10] != 'T' && text[10] != ' ') || text[13] != ':')
        throw ParseError("bad timestamp '" + text + "'", 0);
    const int y = parse_int_field(text, 0, 4);
    const int mo = parse_int_field(text, 5, 2);
    const int d = parse_int_field(text, 8, 2);
    const int h = parse_int_field(text, 11, 2);
    const int mi = parse_int_field(text, 14, 2);
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59)
        throw ParseError("bad timestamp '" + text + "'", 0);
    return days_from_civil(y, mo, d) * kMinutesPerDay + h * 60 + mi;
}

std::string format_iso_minute(Minutes t) {
    int y, mo, d;
    civil_from_days(day_index(t), y, mo, d);
    const int mod = minute_of_day(t);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d", y, mo, d, mod / 60, mod % 60);
    return buf;
}

int parse_hhmm(const std::string& text) {
    if (text.size() != 5 || text[2] != ':') throw ConfigError("bad HH:MM value '" + text + "'");
    const int h = parse_int_field(text, 0, 2);
    const int m = parse_int_field(text, 3, 2);
    if (h > 23 || m > 59) throw ConfigError("bad HH:MM value '" + text + "'");
    return h * 60 + m;
}

std::int64_t parse_iso_date(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw ConfigError("bad date '" + text + "'");
    return days_from_civil(parse_int_field(text, 0, 4), parse_int_field(text, 5, 2),
                           parse_int_field(text, 8, 2));
}

SessionCalendar::SessionCalendar(int open_minute, int close_minute,
                                 std::set<std::int64_t> holidays)
    : open_minute_(open_minute), close_minute_(close_minute), holidays_(std::move(holidays)) {
    if (open_minute < 0 || close_minute > kMinutesPerDay || open_minute >= close_minute)
        throw ConfigError("session open must precede close within one day");
}

SessionCalendar SessionCalendar::from_config(const std::string& open_hhmm,
                                             const std::string& close_hhmm,
                                             const std::vector<std::string>& holiday_dates) {
    std::set<std::int64_t> holidays;
    for (const auto& d : holiday_dates) holidays.insert(parse_iso_date(d));
    return SessionCalendar(parse_hhmm(open_hhmm), parse_hhmm(close_hhmm), std::move(holidays));
}

bool SessionCalendar::is_trading_day(std::int64_t day) const {
    const int dow = static_cast<int>(((day + 3) % 7 + 7) % 7);
    return dow < 5 && holidays_.find(day) == holidays_.end();
}

bool SessionCalendar::is_session_minute(Minutes t) const {
    if (!is_trading_day(day_index(t))) return false;
    const int mod = minute_of_day(t);
    return mod >= open_minute_ && mod < close_minute_;
}

int SessionCalendar::week_bucket(Minutes t) const {
    if (!is_session_minute(t))
        throw ConfigError("timestamp " + format_iso_minute(t) + " is not a session minute");
    return day_of_week(t) * minutes_per_session() + (minute_of_day(t) - open_minute_);
}

std::vector<Minutes> SessionCalendar::session_grid(std::int64_t start_day, int n_weeks) const {
    std::vector<Minutes> grid;
    grid.reserve(static_cast<std::size_t>(n_weeks) * 5 * minutes_per_session());
    for (std::int64_t day = start_day; day < start_day + 7ll * n_weeks; ++day) {
        if (!is_trading_day(day)) continue;
        const Minutes base = day * kMinutesPerDay;
        for (int m = open_minute_; m < close_minute_; ++m) grid.push_back(base + m);
    }
    return grid;
}

}  // namespace cocrash
