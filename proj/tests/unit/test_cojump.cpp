#include <doctest.h>

#include <algorithm>
#include <map>

#include "cocrash/cojump.hpp"
#include "cocrash/rng.hpp"

using namespace cocrash;

namespace {

JumpEvent jump(const std::string& asset, Minutes t, int direction = -1) {
    JumpEvent e;
    e.asset_id = asset;
    e.timestamp = t;
    e.statistic = direction * 10.0;
    e.direction = direction;
    e.raw_return = direction * 0.01;
    return e;
}

std::vector<CoCrashEvent> random_events(Rng& rng, const std::vector<std::string>& universe,
                                        std::size_t n_events) {
    std::vector<CoCrashEvent> events;
    for (std::size_t e = 0; e < n_events; ++e) {
        CoCrashEvent ev;
        ev.timestamp = static_cast<Minutes>(e);
        const std::size_t m = 1 + rng.uniform_below(universe.size());
        std::vector<std::size_t> picks(universe.size());
        for (std::size_t i = 0; i < picks.size(); ++i) picks[i] = i;
        for (std::size_t j = picks.size(); j > 1; --j)
            std::swap(picks[j - 1], picks[rng.uniform_below(j)]);
        for (std::size_t i = 0; i < m; ++i) ev.members.push_back(universe[picks[i]]);
        std::sort(ev.members.begin(), ev.members.end());
        events.push_back(std::move(ev));
    }
    return events;
}

}  // namespace

TEST_CASE("grouping by minute") {
    SUBCASE("an isolated jump is a size-1 event") {
        const auto events = group_events({jump("AAA", 100)});
        REQUIRE(events.size() == 1);
        CHECK(events[0].size_m() == 1);
        CHECK(events[0].members == std::vector<std::string>{"AAA"});
    }
    SUBCASE("three assets at one minute form a single size-3 event") {
        const auto events =
            group_events({jump("CCC", 100), jump("AAA", 100), jump("BBB", 100)});
        REQUIRE(events.size() == 1);
        CHECK(events[0].size_m() == 3);
        CHECK(events[0].members == std::vector<std::string>{"AAA", "BBB", "CCC"});
    }
    SUBCASE("adjacent minutes stay separate events") {
        const auto events = group_events(
            {jump("AAA", 100), jump("BBB", 100), jump("AAA", 101), jump("BBB", 101)});
        REQUIRE(events.size() == 2);
        CHECK(events[0].size_m() == 2);
        CHECK(events[1].size_m() == 2);
    }
    SUBCASE("duplicate (asset, minute) entries are a data error") {
        CHECK_THROWS_AS(group_events({jump("AAA", 100), jump("AAA", 100)}), DataError);
    }
    SUBCASE("directions are preserved per member") {
        const auto events = group_events({jump("AAA", 100, 1), jump("BBB", 100, -1)});
        CHECK(events[0].directions.at("AAA") == 1);
        CHECK(events[0].directions.at("BBB") == -1);
    }
}

TEST_CASE("frequency table hand examples") {
    const std::vector<std::string> universe = {"AAA", "BBB", "CCC"};

    SUBCASE("single pair event") {
        CoCrashEvent ev;
        ev.timestamp = 1;
        ev.members = {"AAA", "BBB"};
        const auto table = build_frequency_table({ev}, universe);
        CHECK(table.count(0, 2) == 1);
        CHECK(table.count(1, 2) == 1);
        CHECK(table.count(2, 2) == 0);
        CHECK(table.marginal(2) == 2);
        CHECK(table.marginal(1) == 0);
        CHECK(table.events_at(2) == 1);
    }
    SUBCASE("counts accumulate per size") {
        CoCrashEvent a1{1, {"AAA"}, {}};
        CoCrashEvent a2{2, {"AAA"}, {}};
        CoCrashEvent ab{3, {"AAA", "BBB"}, {}};
        const auto table = build_frequency_table({a1, a2, ab}, universe);
        CHECK(table.count(0, 1) == 2);
        CHECK(table.count(0, 2) == 1);
        CHECK(table.count(1, 2) == 1);
        CHECK(table.marginal(1) == 2);
        CHECK(table.marginal(2) == 2);
    }
    SUBCASE("a member outside the universe names the symbol") {
        CoCrashEvent ev{1, {"ZZZ"}, {}};
        try {
            build_frequency_table({ev}, universe);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find("ZZZ") != std::string::npos);
        }
    }
}

TEST_CASE("property: marginal and partition identities on random event lists") {
    const std::vector<std::string> universe = {"AAA", "BBB", "CCC", "DDD", "EEE"};
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const auto events = random_events(rng, universe, 1 + rng.uniform_below(40));
        const auto table = build_frequency_table(events, universe);

        // brute-force recount, independent of the table implementation
        std::map<std::size_t, std::uint64_t> events_of_size;
        std::map<std::string, std::uint64_t> per_asset;
        for (const auto& ev : events) {
            ++events_of_size[ev.size_m()];
            for (const auto& member : ev.members) ++per_asset[member];
        }
        for (std::size_t m = 1; m <= table.max_size(); ++m) {
            CHECK(table.marginal(m) == m * events_of_size[m]);
            CHECK(table.events_at(m) == events_of_size[m]);
        }
        for (std::size_t x = 0; x < universe.size(); ++x)
            CHECK(table.asset_total(x) == per_asset[universe[x]]);
    }
}

TEST_CASE("property: table is order independent") {
    const std::vector<std::string> universe = {"AAA", "BBB", "CCC", "DDD"};
    Rng rng(22);
    auto events = random_events(rng, universe, 30);
    const auto table = build_frequency_table(events, universe);
    for (int trial = 0; trial < 10; ++trial) {
        for (std::size_t j = events.size(); j > 1; --j)
            std::swap(events[j - 1], events[rng.uniform_below(j)]);
        const auto permuted = build_frequency_table(events, universe);
        for (std::size_t x = 0; x < universe.size(); ++x)
            for (std::size_t m = 1; m <= table.max_size(); ++m)
                CHECK(permuted.count(x, m) == table.count(x, m));
    }
}

TEST_CASE("size distribution") {
    const std::vector<std::string> universe = {"AAA", "BBB", "CCC"};
    SUBCASE("hand example: sizes 1, 1, 2") {
        CoCrashEvent a{1, {"AAA"}, {}};
        CoCrashEvent b{2, {"BBB"}, {}};
        CoCrashEvent ab{3, {"AAA", "BBB"}, {}};
        const auto dist = size_distribution(build_frequency_table({a, b, ab}, universe));
        CHECK(dist.events_by_size[1] == 2);
        CHECK(dist.events_by_size[2] == 1);
        CHECK(dist.tail_cumulative[1] == 3);
        CHECK(dist.tail_cumulative[2] == 1);
    }
    SUBCASE("tail identities on random inputs") {
        Rng rng(23);
        for (int trial = 0; trial < 50; ++trial) {
            const auto events = random_events(rng, universe, 1 + rng.uniform_below(30));
            const auto table = build_frequency_table(events, universe);
            const auto dist = size_distribution(table);
            CHECK(dist.tail_cumulative[1] == events.size());
            for (std::size_t m = 2; m <= table.max_size(); ++m)
                CHECK(dist.tail_cumulative[m] <= dist.tail_cumulative[m - 1]);
            // cross-check against a direct cumulative
            for (std::size_t m = 1; m <= table.max_size(); ++m) {
                std::uint64_t tail = 0;
                for (const auto& ev : events) tail += ev.size_m() >= m;
                CHECK(dist.tail_cumulative[m] == tail);
            }
        }
    }
    SUBCASE("empty table is a data error") {
        const auto table = build_frequency_table({}, universe);
        CHECK_THROWS_AS(size_distribution(table), DataError);
    }
}
