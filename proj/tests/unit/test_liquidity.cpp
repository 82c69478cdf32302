#include <doctest.h>

#include <cmath>

#include "cocrash/liquidity.hpp"
#include "cocrash/rng.hpp"

using namespace cocrash;

namespace {

CrashFrequencyTable table_from_counts(const std::vector<std::string>& universe,
                                      std::size_t max_size,
                                      const std::vector<std::tuple<std::size_t, std::size_t,
                                                                   std::uint64_t>>& entries) {
    CrashFrequencyTable table(universe, max_size);
    for (const auto& [asset, m, count] : entries) table.count_ref(asset, m) = count;
    for (std::size_t m = 1; m <= max_size; ++m) {
        const auto f_m = table.marginal(m);
        table.set_events_at(m, f_m == 0 ? 0 : std::max<std::uint64_t>(1, f_m / m));
    }
    return table;
}

LiquidityProfile profile_of(std::vector<double> dtv, std::size_t k) {
    LiquidityProfile p;
    p.dtv = std::move(dtv);
    p.k = k;
    std::vector<std::size_t> order(p.dtv.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p.dtv[a] > p.dtv[b]; });
    for (std::size_t i = 0; i < std::min(k, order.size()); ++i) p.top_k_set.insert(order[i]);
    return p;
}

}  // namespace

TEST_CASE("crash-weighted DTV hand values") {
    const std::vector<std::string> universe = {"AAA", "BBB", "CCC"};
    SUBCASE("single crashing asset carries its own DTV") {
        const auto table = table_from_counts(universe, 2, {{0, 2, 3}});
        const auto profile = profile_of({1e6, 2e6, 5e5}, 1);
        CHECK(*crash_weighted_dtv(table, profile, 2) == 1e6);
    }
    SUBCASE("equal frequencies average the DTVs") {
        const auto table = table_from_counts(universe, 1, {{0, 1, 2}, {1, 1, 2}});
        const auto profile = profile_of({1e6, 2e6, 5e5}, 1);
        CHECK(*crash_weighted_dtv(table, profile, 1) == doctest::Approx(1.5e6));
    }
    SUBCASE("3:1 frequencies give the weighted mean 1.25e6") {
        const auto table = table_from_counts(universe, 1, {{0, 1, 3}, {1, 1, 1}});
        const auto profile = profile_of({1e6, 2e6, 5e5}, 1);
        CHECK(*crash_weighted_dtv(table, profile, 1) == doctest::Approx(1.25e6));
    }
    SUBCASE("no mass at m is a gap") {
        const auto table = table_from_counts(universe, 2, {{0, 2, 1}});
        const auto profile = profile_of({1e6, 2e6, 5e5}, 1);
        CHECK_FALSE(crash_weighted_dtv(table, profile, 1).has_value());
    }
    SUBCASE("weighted mean stays inside the DTV range") {
        Rng rng(41);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<std::tuple<std::size_t, std::size_t, std::uint64_t>> entries;
            std::vector<double> dtv(3);
            for (auto& v : dtv) v = 1e5 + 1e6 * rng.uniform();
            for (std::size_t x = 0; x < 3; ++x)
                entries.push_back({x, 1, rng.uniform_below(5)});
            const auto table = table_from_counts(universe, 1, entries);
            const auto profile = profile_of(dtv, 1);
            const auto value = crash_weighted_dtv(table, profile, 1);
            if (!value) continue;
            CHECK(*value >= *std::min_element(dtv.begin(), dtv.end()) - 1e-9);
            CHECK(*value <= *std::max_element(dtv.begin(), dtv.end()) + 1e-9);
        }
    }
}

TEST_CASE("volume-frequency correlation") {
    SUBCASE("a perfect monotone relation is significant rho = 1") {
        std::vector<std::string> universe;
        std::vector<double> dtv;
        std::vector<std::tuple<std::size_t, std::size_t, std::uint64_t>> entries;
        for (std::size_t i = 0; i < 30; ++i) {
            universe.push_back("A" + std::to_string(100 + i));
            dtv.push_back(1e5 * static_cast<double>(i + 1));
            entries.push_back({i, 1, i + 1});
        }
        const auto table = table_from_counts(universe, 1, entries);
        const auto profile = profile_of(dtv, 5);
        const auto result = volume_frequency_correlation(table, profile, 1, 0.05, 2000, 5);
        REQUIRE(result.has_value());
        CHECK(result->rho == 1.0);
        CHECK(result->significant);
    }
    SUBCASE("independent frequencies are usually non-significant") {
        const std::size_t n = 300;
        std::vector<std::string> universe;
        std::vector<double> dtv;
        for (std::size_t i = 0; i < n; ++i) {
            universe.push_back("A" + std::to_string(1000 + i));
            dtv.push_back(1e5 * static_cast<double>(i + 1));
        }
        Rng rng(42);
        int ok = 0;
        const int trials = 20;
        for (int trial = 0; trial < trials; ++trial) {
            std::vector<std::tuple<std::size_t, std::size_t, std::uint64_t>> entries;
            for (std::size_t i = 0; i < n; ++i)
                if (rng.uniform() < 0.2) entries.push_back({i, 1, 1 + rng.uniform_below(4)});
            const auto table = table_from_counts(universe, 1, entries);
            const auto profile = profile_of(dtv, 20);
            const auto result = volume_frequency_correlation(
                table, profile, 1, 0.05, 2000, static_cast<std::uint64_t>(trial));
            REQUIRE(result.has_value());
            if (std::fabs(result->rho) < 0.15 && !result->significant) ++ok;
        }
        CHECK(ok >= trials * 9 / 10);
    }
    SUBCASE("constant frequency vector is a gap") {
        const std::vector<std::string> universe = {"AAA", "BBB", "CCC"};
        const auto table = table_from_counts(universe, 1, {});
        const auto profile = profile_of({1e5, 2e5, 3e5}, 1);
        CHECK_FALSE(volume_frequency_correlation(table, profile, 1).has_value());
    }
}

TEST_CASE("liquid crash fraction") {
    const std::vector<std::string> universe = {"AAA", "BBB", "CCC", "DDD"};
    const auto table = table_from_counts(universe, 4, {{0, 1, 1}});
    const auto profile = profile_of({4e6, 3e6, 2e6, 1e6}, 2);  // top set {AAA, BBB}

    auto event = [&](Minutes t, std::vector<std::string> members) {
        CoCrashEvent ev;
        ev.timestamp = t;
        ev.members = std::move(members);
        return ev;
    };

    SUBCASE("all events touch the top set") {
        const std::vector<CoCrashEvent> events = {event(1, {"AAA", "CCC"}),
                                                  event(2, {"BBB", "DDD"})};
        CHECK(*liquid_crash_fraction(events, table, profile, 2) == 1.0);
    }
    SUBCASE("no event touches the top set") {
        const std::vector<CoCrashEvent> events = {event(1, {"CCC", "DDD"})};
        CHECK(*liquid_crash_fraction(events, table, profile, 2) == 0.0);
    }
    SUBCASE("mixed fraction and missing size gap") {
        const std::vector<CoCrashEvent> events = {event(1, {"AAA", "CCC"}),
                                                  event(2, {"CCC", "DDD"})};
        CHECK(*liquid_crash_fraction(events, table, profile, 2) == 0.5);
        CHECK_FALSE(liquid_crash_fraction(events, table, profile, 3).has_value());
    }
    SUBCASE("pigeonhole: events of size > N - k must touch the top set") {
        const std::vector<CoCrashEvent> events = {event(1, {"AAA", "BBB", "CCC", "DDD"}),
                                                  event(2, {"BBB", "CCC", "DDD"})};
        // N = 4, k = 2: any event of size >= 3 necessarily intersects
        CHECK(*liquid_crash_fraction(events, table, profile, 3) == 1.0);
        CHECK(*liquid_crash_fraction(events, table, profile, 4) == 1.0);
    }
    SUBCASE("invariant to relabeling outside the top set") {
        const std::vector<CoCrashEvent> events = {event(1, {"AAA", "CCC"}),
                                                  event(2, {"CCC", "DDD"})};
        const std::vector<CoCrashEvent> relabeled = {event(1, {"AAA", "DDD"}),
                                                     event(2, {"DDD", "CCC"})};
        CHECK(*liquid_crash_fraction(events, table, profile, 2) ==
              *liquid_crash_fraction(relabeled, table, profile, 2));
    }
}

TEST_CASE("scaling DTV scales the weighted mean and nothing else") {
    std::vector<std::string> universe;
    std::vector<double> dtv;
    std::vector<std::tuple<std::size_t, std::size_t, std::uint64_t>> entries;
    Rng rng(43);
    for (std::size_t i = 0; i < 20; ++i) {
        universe.push_back("A" + std::to_string(100 + i));
        dtv.push_back(1e5 + 1e6 * rng.uniform());
        entries.push_back({i, 1, rng.uniform_below(6)});
    }
    const auto table = table_from_counts(universe, 1, entries);
    const auto base_profile = profile_of(dtv, 5);
    const double lambda = 37.5;
    std::vector<double> scaled = dtv;
    for (auto& v : scaled) v *= lambda;
    const auto scaled_profile = profile_of(scaled, 5);

    CHECK(scaled_profile.top_k_set == base_profile.top_k_set);
    const auto a = crash_weighted_dtv(table, base_profile, 1);
    const auto b = crash_weighted_dtv(table, scaled_profile, 1);
    REQUIRE((a && b));
    CHECK(*b == doctest::Approx(lambda * *a).epsilon(1e-12));
    const auto ra = volume_frequency_correlation(table, base_profile, 1, 0.05, 500, 1);
    const auto rb = volume_frequency_correlation(table, scaled_profile, 1, 0.05, 500, 1);
    REQUIRE((ra && rb));
    CHECK(ra->rho == rb->rho);
}
