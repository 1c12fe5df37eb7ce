#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gts/scenario.hpp"

using namespace gts;

namespace {

bool mentions(const ValidationError& e, const std::string& needle) {
    return std::any_of(e.errors().begin(), e.errors().end(), [&](const std::string& msg) {
        return msg.find(needle) != std::string::npos;
    });
}

const char* kFastTimeScenario = R"({
  "schema_version": 1,
  "description": "fast-time campaign",
  "receiver": {"kind": "multi_frequency", "blanker_beta": 0.0, "tracking_threshold_db": 10.0},
  "continuous": [{"window": [20, 80], "sir_db": {"L1": 50.0, "L5": 60.0}}],
  "pulsed": [
    {"window": [190, 200], "sir_peak_db": {"L1": 40.0, "L5": 45.0}, "duty_cycle": 0.03},
    {"window": [190, 200], "sir_peak_db": {"L1": 40.0, "L5": 45.0}, "duty_cycle": 0.04},
    {"window": [190, 200], "sir_peak_db": {"L1": 40.0, "L5": 45.0}, "duty_cycle": 0.05}
  ],
  "spoofers": [{
    "window": [120, 160],
    "position": [4677334.0, 1170203.0, 4163276.0],
    "mode": {"type": "non_smart", "ssr_db": 15.0},
    "dt_pred": 0.0,
    "targets": ["G07"]
  }]
})";

}  // namespace

TEST_CASE("the fast-time campaign scenario validates") {
    const ThreatScenario sc = parse_scenario(kFastTimeScenario);
    CHECK(sc.receiver_kind.multi_frequency);
    CHECK(sc.receiver.blanker_beta == 0.0);
    CHECK(sc.receiver.tracking_threshold == doctest::Approx(10.0).epsilon(1e-12));
    REQUIRE(sc.continuous.size() == 1);
    CHECK(sc.continuous[0].window.start == 20.0);
    CHECK(sc.continuous[0].window.end == 80.0);
    // dB converted to linear once, at the boundary
    CHECK(sc.continuous[0].sir.at(Band::L1) == doctest::Approx(1e5).epsilon(1e-12));
    CHECK(sc.continuous[0].sir.at(Band::L5) == doctest::Approx(1e6).epsilon(1e-12));
    REQUIRE(sc.pulsed.size() == 3);
    CHECK(sc.pulsed[0].duty_cycle == 0.03);
    CHECK(sc.pulsed[2].duty_cycle == 0.05);
    CHECK(sc.pulsed[1].sir_peak.at(Band::L1) == doctest::Approx(1e4).epsilon(1e-12));
    REQUIRE(sc.spoofers.size() == 1);
    const auto& sp = sc.spoofers[0];
    CHECK(sp.window.start == 120.0);
    CHECK(std::get<NonSmartMode>(sp.mode).ssr == doctest::Approx(31.6228).epsilon(1e-4));
    CHECK(sp.dt_pred == 0.0);
    REQUIRE(sp.targets.size() == 1);
    CHECK(sp.targets[0] == SatelliteId{Constellation::GPS, 7});
    CHECK_FALSE(sp.max_range.has_value());
}

TEST_CASE("invalid JSON is rejected with a message") {
    CHECK_THROWS_AS(parse_scenario("{nope"), ValidationError);
}

TEST_CASE("errors are aggregated, not first-error-only") {
    // window inversion AND bad duty cycle AND missing receiver in one pass
    const char* text = R"({
      "schema_version": 1,
      "continuous": [{"window": [80, 20], "sir_db": {"L1": 50.0}}],
      "pulsed": [{"window": [0, 10], "sir_peak_db": {"L1": 40.0}, "duty_cycle": 0.0}]
    })";
    try {
        parse_scenario(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.errors().size() >= 3);
        CHECK(mentions(e, "window inversion"));
        CHECK(mentions(e, "duty_cycle"));
        CHECK(mentions(e, "receiver"));
    }
}

TEST_CASE("unknown keys are reported with their path") {
    const char* text = R"({
      "schema_version": 1,
      "receiver": {"kind": "multi_frequency", "blanket_beta": 0.1},
      "spoofers": []
    })";
    try {
        parse_scenario(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(mentions(e, "receiver.blanket_beta"));
        CHECK(mentions(e, "unknown key"));
    }
}

TEST_CASE("schema_version is required and pinned") {
    CHECK_THROWS_AS(parse_scenario(R"({"receiver": {"kind": "multi_frequency"}})"),
                    ValidationError);
    CHECK_THROWS_AS(
        parse_scenario(R"({"schema_version": 2, "receiver": {"kind": "multi_frequency"}})"),
        ValidationError);
}

TEST_CASE("receiver kinds") {
    const ThreatScenario single = parse_scenario(
        R"({"schema_version": 1, "receiver": {"kind": "single_frequency", "band": "L5"}})");
    CHECK_FALSE(single.receiver_kind.multi_frequency);
    CHECK(single.receiver_kind.band == Band::L5);

    // band is only meaningful for single-frequency receivers
    CHECK_THROWS_AS(
        parse_scenario(
            R"({"schema_version": 1, "receiver": {"kind": "multi_frequency", "band": "L1"}})"),
        ValidationError);
    CHECK_THROWS_AS(
        parse_scenario(R"({"schema_version": 1, "receiver": {"kind": "single_frequency"}})"),
        ValidationError);
    CHECK_THROWS_AS(parse_scenario(R"({"schema_version": 1, "receiver": {"kind": "dual"}})"),
                    ValidationError);
}

TEST_CASE("blanker beta bounds") {
    auto with_beta = [](const char* b) {
        return std::string(R"({"schema_version": 1, "receiver": {"kind": "multi_frequency",
                             "blanker_beta": )") +
               b + "}}";
    };
    CHECK(parse_scenario(with_beta("0.0")).receiver.blanker_beta == 0.0);
    CHECK(parse_scenario(with_beta("0.5")).receiver.blanker_beta == 0.5);
    CHECK_THROWS_AS(parse_scenario(with_beta("1.0")), ValidationError);
    CHECK_THROWS_AS(parse_scenario(with_beta("-0.1")), ValidationError);
}

TEST_CASE("smart spoofer mode parsing") {
    const char* text = R"({
      "schema_version": 1,
      "receiver": {"kind": "multi_frequency"},
      "spoofers": [{
        "window": [120, 160],
        "position": [0.0, 0.0, 0.0],
        "mode": {"type": "smart", "ssr_min_db": 0.0, "ssr_max_db": 15.0, "ramp_duration": 5.0}
      }]
    })";
    const ThreatScenario sc = parse_scenario(text);
    const auto& smart = std::get<SmartMode>(sc.spoofers[0].mode);
    CHECK(smart.ssr_min == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(smart.ssr_max == doctest::Approx(31.6228).epsilon(1e-4));
    CHECK(smart.ramp_duration == 5.0);

    // inverted ramp bounds and non-positive durations are rejected
    std::string bad(text);
    bad.replace(bad.find("\"ssr_max_db\": 15.0"), 18, "\"ssr_max_db\": -1.0");
    CHECK_THROWS_AS(parse_scenario(bad), ValidationError);
    std::string bad2(text);
    bad2.replace(bad2.find("\"ramp_duration\": 5.0"), 20, "\"ramp_duration\": 0.0");
    CHECK_THROWS_AS(parse_scenario(bad2), ValidationError);
}

TEST_CASE("overlapping spoofers on one satellite are rejected") {
    const char* base = R"({
      "schema_version": 1,
      "receiver": {"kind": "multi_frequency"},
      "spoofers": [
        {"window": [100, 200], "position": [0,0,0],
         "mode": {"type": "non_smart", "ssr_db": 15.0}, "targets": ["G07"]},
        {"window": [150, 250], "position": [9,9,9],
         "mode": {"type": "non_smart", "ssr_db": 15.0}, "targets": [%T%]}
      ]
    })";
    auto with_targets = [&](const char* t) {
        std::string s(base);
        s.replace(s.find("%T%"), 3, t);
        return s;
    };
    // same satellite, overlapping windows: conflict
    CHECK_THROWS_AS(parse_scenario(with_targets("\"G07\"")), ValidationError);
    // disjoint satellite: fine
    CHECK_NOTHROW(parse_scenario(with_targets("\"G08\"")));
    // empty target list means "all", which collides with anything
    std::string all = with_targets("\"G08\"");
    all.replace(all.find("[\"G08\"]"), 7, "[]");
    CHECK_THROWS_AS(parse_scenario(all), ValidationError);
}

TEST_CASE("non-overlapping windows allow the same target") {
    const char* text = R"({
      "schema_version": 1,
      "receiver": {"kind": "multi_frequency"},
      "spoofers": [
        {"window": [100, 200], "position": [0,0,0],
         "mode": {"type": "non_smart", "ssr_db": 15.0}, "targets": ["G07"]},
        {"window": [201, 250], "position": [9,9,9],
         "mode": {"type": "non_smart", "ssr_db": 15.0}, "targets": ["G07"]}
      ]
    })";
    CHECK_NOTHROW(parse_scenario(text));
}

TEST_CASE("max_range must be positive when present") {
    const char* text = R"({
      "schema_version": 1,
      "receiver": {"kind": "multi_frequency"},
      "spoofers": [{"window": [0, 10], "position": [0,0,0],
                    "mode": {"type": "non_smart", "ssr_db": 15.0}, "max_range": -4500.0}]
    })";
    CHECK_THROWS_AS(parse_scenario(text), ValidationError);
}

TEST_CASE("active_at window scheduling") {
    const ThreatScenario sc = parse_scenario(kFastTimeScenario);
    const Vec3 rx{4677000.0, 1170000.0, 4163000.0};

    SUBCASE("gap between windows: nothing active") {
        const ActiveThreatSet at = active_at(sc, 100.0, rx);
        CHECK_FALSE(at.any());
    }
    SUBCASE("spoofing window: spoofer only") {
        const ActiveThreatSet at = active_at(sc, 150.0, rx);
        CHECK(at.continuous.empty());
        CHECK(at.pulsed.empty());
        REQUIRE(at.spoofers.size() == 1);
        CHECK(at.spoofers[0] == 0);
    }
    SUBCASE("pulsed window: all three pulses") {
        const ActiveThreatSet at = active_at(sc, 195.0, rx);
        CHECK(at.pulsed.size() == 3);
        CHECK(at.continuous.empty());
    }
    SUBCASE("continuous window endpoints inclusive") {
        CHECK(active_at(sc, 20.0, rx).continuous.size() == 1);
        CHECK(active_at(sc, 80.0, rx).continuous.size() == 1);
        CHECK(active_at(sc, 80.5, rx).continuous.empty());
    }
}

TEST_CASE("active_at proximity trigger") {
    const char* text = R"({
      "schema_version": 1,
      "receiver": {"kind": "multi_frequency"},
      "spoofers": [{"window": [0, 100], "position": [0.0, 0.0, 0.0],
                    "mode": {"type": "non_smart", "ssr_db": 45.0}, "max_range": 4500.0}]
    })";
    const ThreatScenario sc = parse_scenario(text);
    CHECK(active_at(sc, 50.0, Vec3{4000.0, 0.0, 0.0}).spoofers.size() == 1);
    CHECK(active_at(sc, 50.0, Vec3{5000.0, 0.0, 0.0}).spoofers.empty());
    CHECK(active_at(sc, 50.0, Vec3{4500.0, 0.0, 0.0}).spoofers.size() == 1);  // boundary
}
