#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cocrash/jump_detector.hpp"

namespace cocrash {

// All assets that jumped at one grid minute, treated as a single systemic
// event of size m = |members|. Members are kept sorted by asset id.
struct CoCrashEvent {
    Minutes timestamp = 0;
    std::vector<std::string> members;
    std::map<std::string, int> directions;

    std::size_t size_m() const { return members.size(); }
};

// f[x][m]: number of size-m events containing asset x, plus the marginals
// the downstream analyses need.
class CrashFrequencyTable {
  public:
    CrashFrequencyTable(std::vector<std::string> universe, std::size_t max_size);

    const std::vector<std::string>& universe() const { return universe_; }
    std::size_t max_size() const { return max_size_; }

    std::uint64_t count(std::size_t asset, std::size_t m) const {
        return counts_[asset * (max_size_ + 1) + m];
    }
    std::uint64_t& count_ref(std::size_t asset, std::size_t m) {
        return counts_[asset * (max_size_ + 1) + m];
    }

    // f_m = sum_x f_{x,m} == m * events_at(m)
    std::uint64_t marginal(std::size_t m) const;
    std::uint64_t events_at(std::size_t m) const { return events_by_size_[m]; }
    std::uint64_t total_events() const;
    std::uint64_t asset_total(std::size_t asset) const;

    std::size_t asset_index(const std::string& asset_id) const;

    // Frequencies across the whole universe at size m, in universe order.
    std::vector<double> frequencies(std::size_t m) const;

    void record_event_size(std::size_t m) { ++events_by_size_[m]; }
    void set_events_at(std::size_t m, std::uint64_t n) { events_by_size_[m] = n; }

  private:
    std::vector<std::string> universe_;
    std::size_t max_size_;
    std::vector<std::uint64_t> counts_;          // (max_size+1) per asset
    std::vector<std::uint64_t> events_by_size_;  // n_m
};

// Groups grid-aligned jump events by timestamp. Duplicate (asset, timestamp)
// pairs are a data error.
std::vector<CoCrashEvent> group_events(const std::vector<JumpEvent>& events);

CrashFrequencyTable build_frequency_table(const std::vector<CoCrashEvent>& cocrashes,
                                          const std::vector<std::string>& universe);

// Event counts by size and the tail cumulative, over m = 1..max_size.
struct SizeDistribution {
    std::vector<std::uint64_t> events_by_size;  // index m, [0] unused
    std::vector<std::uint64_t> tail_cumulative;  // f(M >= m)
};

SizeDistribution size_distribution(const CrashFrequencyTable& table);

}  // namespace cocrash
