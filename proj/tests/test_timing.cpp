#include <doctest.h>

#include "rhsim/timing.hpp"

using namespace rhsim;

namespace {

TimingConfig table1() { return TimingConfig{}; }

}  // namespace

TEST_CASE("effective intervals at MR4 4x match the baseline parameters") {
    TimingConfig cfg = table1();
    cfg.validate();
    CHECK(cfg.trefi_effective() == 15'625 * kPicosPerNs);
    CHECK(cfg.trefw_effective() == 128'000'000 * kPicosPerNs);  // 128ms
}

TEST_CASE("effective intervals at MR4 1x give the 32ms window") {
    TimingConfig cfg = table1();
    cfg.mr4 = {1, 1};
    CHECK(cfg.trefi_effective() == parse_ns("3906.25"));
    CHECK(cfg.trefw_effective() == 32'000'000 * kPicosPerNs);
}

TEST_CASE("identity multiplier leaves tREFI unchanged") {
    TimingConfig cfg = table1();
    cfg.mr4 = {1, 1};
    CHECK(cfg.trefi_effective() == cfg.trefi);
}

TEST_CASE("invalid multiplier is a configuration error") {
    CHECK_THROWS_AS(Mr4Multiplier::from_double(3.0), config_error);
    TimingConfig cfg = table1();
    cfg.mr4 = {3, 1};
    CHECK_THROWS_AS(cfg.validate(), config_error);
}

TEST_CASE("0.5x multiplier stays exact in picoseconds") {
    TimingConfig cfg = table1();
    cfg.mr4 = Mr4Multiplier::from_double(0.5);
    cfg.validate();
    CHECK(cfg.trefi_effective() == 1'953'125);  // 1953.125ns
    CHECK(cfg.trefi_effective() * 2 == cfg.trefi);
}

TEST_CASE("MPA per tREFIe") {
    TimingConfig cfg = table1();
    CHECK(cfg.mpa_per_refi() == 255);

    SUBCASE("exactly one slot") {
        cfg.trefi = cfg.trfc + cfg.trc_min;
        cfg.mr4 = {1, 1};
        CHECK(cfg.mpa_per_refi() == 1);
    }
    SUBCASE("hand-computed floor") {
        cfg.trefi = 1000 * kPicosPerNs;
        cfg.mr4 = {1, 1};
        cfg.trfc = 100 * kPicosPerNs;
        cfg.trc_min = 70 * kPicosPerNs;
        CHECK(cfg.mpa_per_refi() == 12);  // floor(900/70)
    }
    SUBCASE("tREFIe <= tRFC is a configuration error") {
        cfg.trefi = 100 * kPicosPerNs;
        cfg.mr4 = {1, 1};
        CHECK_THROWS_AS(cfg.validate(), config_error);
        CHECK_THROWS_AS(cfg.mpa_per_refi(), config_error);
    }
}

TEST_CASE("MPA per tREFWe floors once across the window") {
    TimingConfig cfg = table1();
    CHECK(cfg.mpa_per_refw() == 2'095'104);  // 255.75 * 8192

    SUBCASE("one slot per interval") {
        cfg.trefi = cfg.trfc + cfg.trc_min;
        cfg.mr4 = {1, 1};
        CHECK(cfg.mpa_per_refw() == 8192);
    }
    SUBCASE("MR4 1x") {
        // (3906.25 - 280) / 60 * 8192 = 495104 exactly.
        cfg.mr4 = {1, 1};
        CHECK(cfg.mpa_per_refw() == 495'104);
    }
}

TEST_CASE("window MPA dominates per-interval MPA for assorted configs") {
    // Single-floor never loses slots to per-interval flooring.
    for (int trefi_ns : {500, 777, 1000, 3906, 15625}) {
        for (int trc : {17, 60, 70}) {
            TimingConfig cfg = table1();
            cfg.trefi = static_cast<picos_t>(trefi_ns) * kPicosPerNs;
            cfg.mr4 = {1, 1};
            cfg.trfc = 280 * kPicosPerNs;
            cfg.trc_min = static_cast<picos_t>(trc) * kPicosPerNs;
            if (cfg.trefi_effective() <= cfg.trfc) continue;
            CHECK(cfg.mpa_per_refw() >= 8192 * cfg.mpa_per_refi());
        }
    }
}

TEST_CASE("doubling the multiplier at least doubles the window MPA") {
    TimingConfig cfg = table1();
    cfg.mr4 = {1, 1};
    const auto base = cfg.mpa_per_refw();
    cfg.mr4 = {2, 1};
    const auto doubled = cfg.mpa_per_refw();
    cfg.mr4 = {4, 1};
    const auto quadrupled = cfg.mpa_per_refw();
    CHECK(doubled >= 2 * base);
    CHECK(quadrupled >= 2 * doubled);
}

TEST_CASE("8192 accumulated intervals equal the window exactly") {
    TimingConfig cfg = table1();
    picos_t acc = 0;
    for (int i = 0; i < 8192; ++i) acc += cfg.trefi_effective();
    CHECK(acc == cfg.trefw_effective());
}

TEST_CASE("nanosecond literals round-trip through picoseconds") {
    CHECK(parse_ns("3906.25") == 3'906'250);
    CHECK(parse_ns("280") == 280'000);
    CHECK(parse_ns("0.001") == 1);
    CHECK(format_ns(3'906'250) == "3906.25");
    CHECK(format_ns(280'000) == "280");
    CHECK_THROWS_AS(parse_ns("1.0001"), input_error);
    CHECK_THROWS_AS(parse_ns("abc"), input_error);
}
