#include "cocrash/cojump.hpp"

#include <algorithm>
#include <set>

#include "cocrash/error.hpp"

namespace cocrash {

CrashFrequencyTable::CrashFrequencyTable(std::vector<std::string> universe, std::size_t max_size)
    : universe_(std::move(universe)),
      max_size_(max_size),
      counts_(universe_.size() * (max_size + 1), 0),
      events_by_size_(max_size + 1, 0) {}

std::uint64_t CrashFrequencyTable::marginal(std::size_t m) const {
    std::uint64_t total = 0;
    for (std::size_t x = 0; x < universe_.size(); ++x) total += count(x, m);
    return total;
}

std::uint64_t CrashFrequencyTable::total_events() const {
    std::uint64_t total = 0;
    for (std::size_t m = 1; m <= max_size_; ++m) total += events_by_size_[m];
    return total;
}

std::uint64_t CrashFrequencyTable::asset_total(std::size_t asset) const {
    std::uint64_t total = 0;
    for (std::size_t m = 1; m <= max_size_; ++m) total += count(asset, m);
    return total;
}

std::size_t CrashFrequencyTable::asset_index(const std::string& asset_id) const {
    const auto it = std::find(universe_.begin(), universe_.end(), asset_id);
    if (it == universe_.end()) throw LookupError("asset '" + asset_id + "' not in universe");
    return static_cast<std::size_t>(it - universe_.begin());
}

std::vector<double> CrashFrequencyTable::frequencies(std::size_t m) const {
    if (m == 0 || m > max_size_) throw RangeError("size m out of range");
    std::vector<double> f(universe_.size());
    for (std::size_t x = 0; x < universe_.size(); ++x)
        f[x] = static_cast<double>(count(x, m));
    return f;
}

std::vector<CoCrashEvent> group_events(const std::vector<JumpEvent>& events) {
    std::map<Minutes, CoCrashEvent> by_minute;
    std::set<std::pair<Minutes, std::string>> seen;
    for (const JumpEvent& e : events) {
        if (!seen.insert({e.timestamp, e.asset_id}).second)
            throw DataError("duplicate jump entry for " + e.asset_id + " at " +
                            format_iso_minute(e.timestamp));
        CoCrashEvent& ev = by_minute[e.timestamp];
        ev.timestamp = e.timestamp;
        ev.members.push_back(e.asset_id);
        ev.directions[e.asset_id] = e.direction;
    }
    std::vector<CoCrashEvent> out;
    out.reserve(by_minute.size());
    for (auto& [t, ev] : by_minute) {
        std::sort(ev.members.begin(), ev.members.end());
        out.push_back(std::move(ev));
    }
    return out;
}

CrashFrequencyTable build_frequency_table(const std::vector<CoCrashEvent>& cocrashes,
                                          const std::vector<std::string>& universe) {
    std::size_t max_size = 0;
    for (const auto& ev : cocrashes) max_size = std::max(max_size, ev.size_m());

    CrashFrequencyTable table(universe, max_size);
    for (const auto& ev : cocrashes) {
        const std::size_t m = ev.size_m();
        table.record_event_size(m);
        for (const auto& member : ev.members) {
            std::size_t x;
            try {
                x = table.asset_index(member);
            } catch (const LookupError&) {
                throw DataError("co-crash member '" + member + "' outside the universe");
            }
            ++table.count_ref(x, m);
        }
    }
    return table;
}

SizeDistribution size_distribution(const CrashFrequencyTable& table) {
    if (table.total_events() == 0) throw DataError("size_distribution: table has no events");
    SizeDistribution dist;
    const std::size_t max_size = table.max_size();
    dist.events_by_size.assign(max_size + 1, 0);
    dist.tail_cumulative.assign(max_size + 1, 0);
    for (std::size_t m = 1; m <= max_size; ++m) dist.events_by_size[m] = table.events_at(m);
    std::uint64_t tail = 0;
    for (std::size_t m = max_size; m >= 1; --m) {
        tail += dist.events_by_size[m];
        dist.tail_cumulative[m] = tail;
    }
    return dist;
}

}  // namespace cocrash
