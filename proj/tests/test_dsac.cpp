#include <doctest.h>

#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "rhsim/dsac.hpp"

using namespace rhsim;

namespace {

TimingConfig desk_timing(std::int64_t rh_threshold) {
    TimingConfig t;
    t.rows_per_bank = 4096;
    t.rh_threshold = rh_threshold;
    return t;
}

DsacConfig desk_dsac(std::size_t capacity, std::int64_t mpa_term = 16) {
    DsacConfig d;
    d.capacity = capacity;
    d.trr_mpa_term = mpa_term;
    d.blast_radius = 1;
    return d;
}

void hammer(Dsac& dsac, row_t row, int times, picos_t tras = 42'000) {
    for (int i = 0; i < times; ++i) dsac.on_activation(row, tras, 0);
}

}  // namespace

TEST_CASE("time weight follows the logarithmic law") {
    const picos_t tras_min = 42'000;
    CHECK(time_weight(tras_min, tras_min, 0.0) == 0.0);
    CHECK(time_weight(9 * tras_min, tras_min, 0.0) == 0.0);
    CHECK(time_weight(2 * tras_min, tras_min, 1.0) == doctest::Approx(1.0));
    CHECK(time_weight(4 * tras_min, tras_min, 2.0) == doctest::Approx(4.0));
    CHECK(time_weight(tras_min, tras_min, 3.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(time_weight(tras_min - 1, tras_min, 1.0), input_error);
}

TEST_CASE("replacement probability is 1/(min+1)") {
    CHECK(replacement_probability(2) == doctest::Approx(1.0 / 3.0));
    CHECK(replacement_probability(3) == doctest::Approx(0.25));
    CHECK(replacement_probability(0) == 1.0);
}

TEST_CASE("insertion fills free slots with count 1") {
    Dsac dsac(desk_dsac(4), desk_timing(2000), 1);
    hammer(dsac, 42, 1);
    REQUIRE(dsac.table().size() == 1);
    CHECK(dsac.table().entry(0).row == 42);
    CHECK(dsac.table().entry(0).count == 1.0);
}

TEST_CASE("hits increment the matching entry") {
    Dsac dsac(desk_dsac(2), desk_timing(2000), 1);
    hammer(dsac, 7, 3);
    hammer(dsac, 9, 1);
    CHECK(dsac.table().entry(0).count == 3.0);
    CHECK(dsac.table().entry(1).count == 1.0);
    CHECK(dsac.weighted_sum() == 4.0);
}

TEST_CASE("stochastic replacement walkthrough with two counters") {
    // Two tracked rows at counts 3 and 2; a newcomer is rejected twice and
    // admitted on its third offer, inheriting min+1 = 3. Found by scanning
    // seeds for draws (>1/3, >1/3, <=1/3) against the fixed P(r).
    std::uint64_t seed = 0;
    for (std::uint64_t s = 1; s < 200; ++s) {
        RandomSource probe(s);
        const double d1 = probe.next_double();
        const double d2 = probe.next_double();
        const double d3 = probe.next_double();
        if (d1 > 1.0 / 3 && d2 > 1.0 / 3 && d3 <= 1.0 / 3) {
            seed = s;
            break;
        }
    }
    REQUIRE(seed != 0);

    Dsac dsac(desk_dsac(2), desk_timing(2000), seed);
    hammer(dsac, 1, 3);  // row a
    hammer(dsac, 2, 2);  // row b holds the minimum
    hammer(dsac, 3, 3);  // row c offered three times

    CHECK(dsac.table().entry(0).row == 1);
    CHECK(dsac.table().entry(0).count == 3.0);
    CHECK(dsac.table().entry(1).row == 3);
    CHECK(dsac.table().entry(1).count == 3.0);
    const auto [min_pos, min_count] = dsac.table().min_entry();
    CHECK(replacement_probability(min_count) == doctest::Approx(0.25));
}

TEST_CASE("replacement evicts the lowest slot when counts tie") {
    // All-equal counts: slot 0 is the replacement victim.
    std::uint64_t seed = 0;
    for (std::uint64_t s = 1; s < 100; ++s) {
        RandomSource probe(s);
        if (probe.next_double() <= 1.0 / 3) {
            seed = s;
            break;
        }
    }
    REQUIRE(seed != 0);
    Dsac dsac(desk_dsac(2), desk_timing(2000), seed);
    hammer(dsac, 1, 2);
    hammer(dsac, 2, 2);
    hammer(dsac, 3, 1);
    CHECK(dsac.table().entry(0).row == 3);
    CHECK(dsac.table().entry(0).count == 3.0);
    CHECK(dsac.table().entry(1).row == 2);
}

TEST_CASE("replacement frequency tracks 1/(min+1)") {
    // Fresh capacity-1 state per offer; success rate vs Bernoulli(1/6).
    const int offers = 100'000;
    const int m = 5;
    RandomSource seeder(99);
    int replaced = 0;
    std::optional<Dsac> dsac;
    auto rebuild = [&] {
        dsac.emplace(desk_dsac(1), desk_timing(2000), seeder.next_u64());
        hammer(*dsac, 10, m);
    };
    rebuild();
    for (int i = 0; i < offers; ++i) {
        const row_t fresh = 100;
        dsac->on_activation(fresh, 42'000, 0);
        if (dsac->table().entry(0).row == fresh) {
            ++replaced;
            rebuild();
        }
    }
    const double p = 1.0 / (m + 1);
    const double freq = static_cast<double>(replaced) / offers;
    const double sigma = std::sqrt(p * (1 - p) / offers);
    CHECK(std::abs(freq - p) < 3 * sigma);
}

TEST_CASE("admission within k offers matches 1-(1-1/(m+1))^k") {
    struct Case { int m, k; };
    for (const Case c : {Case{5, 5}, Case{9, 18}, Case{99, 100}}) {
        const int trials = 4000;
        RandomSource seeder(c.m * 1000 + c.k);
        int admitted = 0;
        for (int t = 0; t < trials; ++t) {
            Dsac dsac(desk_dsac(2), desk_timing(100000), seeder.next_u64());
            hammer(dsac, 1, c.m);
            hammer(dsac, 2, c.m + 50);  // keeps the min stable at m
            for (int k = 0; k < c.k; ++k) {
                dsac.on_activation(500, 42'000, 0);
                if (dsac.table().find(500) >= 0) {
                    ++admitted;
                    break;
                }
            }
        }
        const double p = 1.0 - std::pow(1.0 - 1.0 / (c.m + 1), c.k);
        const double freq = static_cast<double>(admitted) / trials;
        const double sigma = std::sqrt(p * (1 - p) / trials);
        INFO("m=", c.m, " k=", c.k, " freq=", freq, " p=", p);
        CHECK(std::abs(freq - p) < 3 * sigma);
    }
}

TEST_CASE("TRR threshold arithmetic") {
    SUBCASE("Table 1 threshold is 9744") {
        DsacConfig d;  // defaults: capacity 20, term 256
        d.rh_threshold = 20000;
        CHECK(d.trr_threshold() == 9744.0);
    }
    SUBCASE("zero sum never reaches it") {
        Dsac dsac(desk_dsac(4), desk_timing(2000), 1);
        CHECK_FALSE(dsac.trr_threshold_reached());
    }
    SUBCASE("boundary is inclusive") {
        Dsac dsac(desk_dsac(4), desk_timing(2000), 1);  // 1000 - 16 = 984
        hammer(dsac, 1, 983);
        CHECK_FALSE(dsac.trr_threshold_reached());
        hammer(dsac, 1, 1);
        CHECK(dsac.trr_threshold_reached());
    }
}

TEST_CASE("TRR picks the maximum row and clears the table") {
    TimingConfig timing = desk_timing(64);  // threshold 32 - 16 = 16
    Dsac dsac(desk_dsac(4), timing, 1);
    hammer(dsac, 100, 11);
    hammer(dsac, 200, 12);
    hammer(dsac, 300, 9);
    hammer(dsac, 400, 10);

    const TrrAction action = dsac.on_refresh(1, 0);
    REQUIRE(action.aggressor.has_value());
    CHECK(*action.aggressor == 200);
    CHECK(action.victims == std::vector<row_t>{199, 201});
    CHECK(dsac.table().size() == 0);
    CHECK(dsac.weighted_sum() == 0.0);

    // Flag cleared: the next refresh is a no-op.
    CHECK(dsac.on_refresh(2, 0).no_op());
}

TEST_CASE("no TRR before the flag arms") {
    Dsac dsac(desk_dsac(4), desk_timing(2000), 1);
    hammer(dsac, 100, 5);
    CHECK(dsac.on_refresh(0, 0).no_op());
    CHECK(dsac.table().size() == 1);  // table untouched
}

TEST_CASE("victims clip at row zero") {
    TimingConfig timing = desk_timing(64);
    DsacConfig d = desk_dsac(2);
    d.blast_radius = 2;
    Dsac dsac(d, timing, 1);
    hammer(dsac, 0, 40);
    const TrrAction action = dsac.on_refresh(0, 0);
    REQUIRE(action.aggressor.has_value());
    CHECK(*action.aggressor == 0);
    CHECK(action.victims == std::vector<row_t>{1, 2});
}

TEST_CASE("estimates over-approximate the tracked span, error within min") {
    // Exact per-row oracle on random streams. An entry's count covers at
    // least every arrival since the row last entered the table (arrivals
    // lost to filtering while it was outside are gone for good, so the
    // since-reset total is not a lower bound), and the overestimate side is
    // capped by the current minimum count (Eq.-6 testable form).
    for (std::size_t capacity : {2u, 4u, 8u}) {
        RandomSource stream(capacity * 77);
        TimingConfig timing = desk_timing(1 << 20);  // no TRR interference
        Dsac dsac(desk_dsac(capacity, 16), timing, capacity);
        std::map<row_t, std::int64_t> truth;       // since stream start
        std::map<row_t, std::int64_t> entry_base;  // truth before admission
        bool lower_held = true, upper_held = true;
        for (int i = 0; i < 10'000; ++i) {
            const row_t row = static_cast<row_t>(stream.next_below(64));
            const bool was_in = dsac.table().find(row) >= 0;
            ++truth[row];
            dsac.on_activation(row, 42'000, 0);
            if (!was_in && dsac.table().find(row) >= 0)
                entry_base[row] = truth[row] - 1;

            const auto [min_pos, min_count] = dsac.table().min_entry();
            for (std::size_t pos = 0; pos < dsac.table().capacity(); ++pos) {
                const auto& e = dsac.table().entry(pos);
                if (e.empty()) continue;
                const auto since_insertion =
                    static_cast<double>(truth[e.row] - entry_base[e.row]);
                const auto since_start = static_cast<double>(truth[e.row]);
                if (e.count < since_insertion) lower_held = false;
                if (e.count - since_start > min_count) upper_held = false;
            }
        }
        CHECK(lower_held);
        CHECK(upper_held);
    }
}

TEST_CASE("minimum count respects the adaptive-threshold bound") {
    // Uniform weights: min <= (RH/2 - term)/c plus one step of overshoot.
    TimingConfig timing = desk_timing(2000);
    DsacConfig d = desk_dsac(4);  // bound (1000-16)/4 = 246
    Dsac dsac(d, timing, 3);
    RandomSource stream(5);
    bool bound_held = true;
    for (int i = 0; i < 200'000; ++i) {
        dsac.on_activation(static_cast<row_t>(stream.next_below(8)), 42'000, 0);
        if (dsac.table().size() == dsac.table().capacity() &&
            dsac.table().min_entry().second > 246.0 + 1.0) {
            bound_held = false;
        }
        dsac.on_refresh(static_cast<std::uint64_t>(i), 0);
    }
    CHECK(bound_held);
}

TEST_CASE("identical seed and stream give identical TRR actions") {
    auto run = [](std::uint64_t seed) {
        TimingConfig timing = desk_timing(200);
        Dsac dsac(desk_dsac(4), timing, seed);
        RandomSource stream(31337);
        std::vector<TrrAction> actions;
        std::uint64_t cmd = 0;
        for (int i = 0; i < 20'000; ++i) {
            dsac.on_activation(static_cast<row_t>(stream.next_below(32)), 42'000, 0);
            if (i % 40 == 0) actions.push_back(dsac.on_refresh(cmd++, 0));
        }
        return actions;
    };
    const auto a = run(11), b = run(11), c = run(12);
    REQUIRE(a.size() == b.size());
    bool equal = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].aggressor != b[i].aggressor || a[i].victims != b[i].victims)
            equal = false;
    }
    CHECK(equal);

    bool all_same_as_c = true;
    for (std::size_t i = 0; i < std::min(a.size(), c.size()); ++i) {
        if (a[i].aggressor != c[i].aggressor) all_same_as_c = false;
    }
    CHECK_FALSE(all_same_as_c);
}

TEST_CASE("time weights flow into counts and the threshold sum") {
    TimingConfig timing = desk_timing(2000);
    DsacConfig d = desk_dsac(2);
    d.alpha = 1.0;
    Dsac dsac(d, timing, 1);
    dsac.on_activation(5, 2 * timing.tras_min, 0);  // weight 1
    CHECK(dsac.table().entry(0).count == doctest::Approx(2.0));
    CHECK(dsac.weighted_sum() == doctest::Approx(2.0));
}

TEST_CASE("lfsr draws fall below the probability-LUT cut exactly cut-1 times per period") {
    // Every nonzero 20-bit state appears exactly once per period, so the
    // admissions among a full period of draws are exact, not statistical.
    RandomSource rng(77, RngMode::lfsr20);
    const std::uint32_t cut = (1u << 20) / (3 + 1);  // min count 3
    std::uint32_t below = 0;
    for (std::uint32_t i = 0; i < (1u << 20) - 1; ++i)
        if (rng.next_lfsr20() < cut) ++below;
    CHECK(below == cut - 1);
}

TEST_CASE("lfsr mode admits at the LUT rate for independent offers") {
    // One offer per fresh seed; consecutive draws of one LFSR trajectory are
    // shift-correlated, so the i.i.d. check needs independent starts.
    TimingConfig timing = desk_timing(1 << 20);
    DsacConfig d = desk_dsac(1);
    d.rng_mode = RngMode::lfsr20;
    const int offers = 40'000;
    RandomSource seeder(4);
    int replaced = 0;
    const int m = 3;
    std::optional<Dsac> dsac;
    for (int i = 0; i < offers; ++i) {
        dsac.emplace(d, timing, seeder.next_u64());
        hammer(*dsac, 10, m);
        dsac->on_activation(100, 42'000, 0);
        if (dsac->table().entry(0).row == 100) ++replaced;
    }
    const double p = 0.25;  // floor(2^20 / 4) / 2^20
    const double freq = static_cast<double>(replaced) / offers;
    const double sigma = std::sqrt(p * (1 - p) / offers);
    CHECK(std::abs(freq - p) < 4 * sigma);
}
