#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <sstream>

#include "gts/engine.hpp"
#include "gts/synth.hpp"

using namespace gts;

namespace {

std::vector<MeasurementEpoch> small_trace(double duration_s = 30.0, int sats = 4) {
    SynthParams p;
    p.duration_s = duration_s;
    p.rate_hz = 1.0;
    p.n_satellites = sats;
    p.seed = 42;
    return synth_trace(p);
}

ThreatScenario empty_scenario() {
    ThreatScenario sc;
    sc.receiver.blanker_beta = 0.0;
    sc.receiver.tracking_threshold = 10.0;
    sc.receiver_kind = ReceiverKind::multi();
    return sc;
}

ThreatScenario jamming_scenario() {
    ThreatScenario sc = empty_scenario();
    ContinuousInterferer jam;
    jam.window = TimeWindow{5.0, 12.0};
    jam.sir = {{Band::L1, db_to_linear(20.0)}, {Band::L5, db_to_linear(30.0)}};
    sc.continuous.push_back(jam);
    return sc;
}

ThreatScenario spoofing_scenario(const std::vector<MeasurementEpoch>& epochs) {
    ThreatScenario sc = empty_scenario();
    SpooferConfig sp;
    sp.window = TimeWindow{10.0, 20.0};
    sp.position = epochs.front().receiver_position + Vec3{300.0, 400.0, 0.0};
    sp.mode = NonSmartMode{db_to_linear(15.0)};
    sp.targets = {SatelliteId{Constellation::GPS, 1}};
    sc.spoofers.push_back(sp);
    return sc;
}

std::string run_to_string(const std::vector<MeasurementEpoch>& epochs, const RunConfig& cfg,
                          RunSummary* summary_out = nullptr) {
    std::ostringstream out;
    FdrWriter writer(out);
    RunSummary s = run(vector_source(epochs), cfg, writer);
    if (summary_out) *summary_out = s;
    return out.str();
}

}  // namespace

TEST_CASE("a threat-free run is the identity, bit for bit") {
    const auto epochs = small_trace();
    EngineState state;
    const ThreatScenario sc = empty_scenario();
    std::size_t n_records = 0;
    for (const auto& e : epochs) {
        for (const auto& rec : step(e, sc, state)) {
            ++n_records;
            CHECK(rec.gain_db == 0.0);
            CHECK(rec.snr_out_db == rec.snr_in_db);
            CHECK(rec.pr_out_m == rec.pr_in_m);
            CHECK(rec.drift_m == 0.0);
            CHECK(rec.deviation_s == 0.0);
            CHECK_FALSE(rec.locked);
            CHECK_FALSE(rec.obscured);
            CHECK_FALSE(rec.gated_l1);
            CHECK_FALSE(rec.gated_l5);
            CHECK(rec.threats.empty());
            REQUIRE(rec.combined_pr_m.has_value());
            CHECK(*rec.combined_pr_m == rec.pr_in_m);  // combine(x, x) == x exactly
        }
    }
    CHECK(n_records == epochs.size() * 4 * 2);  // epochs x satellites x bands
}

TEST_CASE("step is deterministic") {
    const auto epochs = small_trace(5.0);
    const ThreatScenario sc = jamming_scenario();
    EngineState s1, s2;
    for (const auto& e : epochs) {
        const auto a = step(e, sc, s1);
        const auto b = step(e, sc, s2);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].gain_db == b[i].gain_db);
            CHECK(a[i].pr_out_m == b[i].pr_out_m);
        }
    }
}

TEST_CASE("step rejects time going backwards") {
    const auto epochs = small_trace(5.0);
    const ThreatScenario sc = empty_scenario();
    EngineState state;
    step(epochs[2], sc, state);
    CHECK_THROWS_AS(step(epochs[0], sc, state), std::invalid_argument);
}

TEST_CASE("continuous jamming applies the expected gain inside its window only") {
    const auto epochs = small_trace();
    const ThreatScenario sc = jamming_scenario();

    // independent gain oracle: all synth satellites share 45 dB SNR
    const double snr_peak = db_to_linear(45.0);
    const double gain_l1 = 1.0 / (1.0 + snr_peak / db_to_linear(20.0));
    const double gain_l5 = 1.0 / (1.0 + snr_peak / db_to_linear(30.0));

    EngineState state;
    for (const auto& e : epochs) {
        const bool in_window = e.t >= 5.0 && e.t <= 12.0;
        for (const auto& rec : step(e, sc, state)) {
            if (in_window) {
                const double expected = rec.band == Band::L1 ? gain_l1 : gain_l5;
                CHECK(rec.gain_db == doctest::Approx(linear_to_db(expected)).epsilon(1e-12));
                CHECK(rec.snr_out_db == rec.snr_in_db + rec.gain_db);
                REQUIRE(rec.threats.size() == 1);
                CHECK(rec.threats[0] == "continuous[0]");
            } else {
                CHECK(rec.gain_db == 0.0);
                CHECK(rec.threats.empty());
            }
        }
    }
}

TEST_CASE("spoofer capture swaps the tracked signal for the target only") {
    const auto epochs = small_trace();
    const ThreatScenario sc = spoofing_scenario(epochs);
    const SatelliteId target{Constellation::GPS, 1};

    const double snr = db_to_linear(45.0);
    const double ssr = db_to_linear(15.0);
    const double locked_gain_db = linear_to_db(ssr / (1.0 + snr));

    EngineState state;
    for (const auto& e : epochs) {
        const bool in_window = e.t >= 10.0 && e.t <= 20.0;
        for (const auto& rec : step(e, sc, state)) {
            if (in_window && rec.sat == target) {
                CHECK(rec.locked);  // non-smart: full power from the window start
                CHECK(rec.gain_db == doctest::Approx(locked_gain_db).epsilon(1e-12));
                CHECK(rec.deviation_s > 0.0);
                const bool gated = rec.band == Band::L1 ? rec.gated_l1 : rec.gated_l5;
                if (gated) {
                    CHECK(rec.drift_m == 0.0);
                } else {
                    CHECK(rec.drift_m ==
                          doctest::Approx(kSpeedOfLight * rec.deviation_s).epsilon(1e-12));
                }
                REQUIRE(rec.threats.size() == 1);
                CHECK(rec.threats[0] == "spoofer[0]");
            } else {
                CHECK_FALSE(rec.locked);
                CHECK(rec.gain_db == 0.0);
                CHECK(rec.drift_m == 0.0);
                CHECK(rec.threats.empty());
            }
        }
    }
}

TEST_CASE("run summary aggregates spans, drift, gain, and obscuration") {
    const auto epochs = small_trace();
    ThreatScenario sc = jamming_scenario();
    // crank the jammer until everything is buried
    sc.continuous[0].sir = {{Band::L1, db_to_linear(-30.0)}, {Band::L5, db_to_linear(-30.0)}};

    RunConfig cfg;
    cfg.scenario = sc;
    RunSummary summary;
    run_to_string(epochs, cfg, &summary);

    CHECK(summary.epochs == 30);
    CHECK(summary.records_written == 30 * 4 * 2);
    REQUIRE(summary.threat_spans.count("continuous[0]") == 1);
    CHECK(summary.threat_spans.at("continuous[0]").first_t == 5.0);
    CHECK(summary.threat_spans.at("continuous[0]").last_t == 12.0);
    CHECK(summary.min_gain_db.at(Band::L1) < -70.0);
    // 8 epochs in [5, 12], all 4 satellites obscured in each
    CHECK(summary.obscured_sat_epochs == 8 * 4);
    for (const auto& [sat, drift] : summary.max_abs_drift_m) CHECK(drift == 0.0);
    CHECK_FALSE(summary.pacing.has_value());
}

TEST_CASE("spoofing drift shows up in the run summary") {
    const auto epochs = small_trace();
    RunConfig cfg;
    cfg.scenario = spoofing_scenario(epochs);
    RunSummary summary;
    run_to_string(epochs, cfg, &summary);

    REQUIRE(summary.threat_spans.count("spoofer[0]") == 1);
    CHECK(summary.threat_spans.at("spoofer[0]").first_t == 10.0);
    CHECK(summary.threat_spans.at("spoofer[0]").last_t == 20.0);
    CHECK(summary.max_abs_drift_m.at(SatelliteId{Constellation::GPS, 1}) > 0.0);
    CHECK(summary.max_abs_drift_m.at(SatelliteId{Constellation::GPS, 2}) == 0.0);
}

TEST_CASE("active-only verbosity keeps threat epochs and drops the rest") {
    const auto epochs = small_trace();
    RunConfig full_cfg;
    full_cfg.scenario = jamming_scenario();
    RunConfig active_cfg = full_cfg;
    active_cfg.verbosity = RecordVerbosity::ActiveOnly;

    RunSummary full_summary, active_summary;
    run_to_string(epochs, full_cfg, &full_summary);
    const std::string active_bytes = run_to_string(epochs, active_cfg, &active_summary);

    CHECK(full_summary.records_written == 30 * 4 * 2);
    CHECK(active_summary.records_written == 8 * 4 * 2);  // only [5, 12]

    std::istringstream in(active_bytes);
    for (const auto& rec : read_fdr(in)) CHECK_FALSE(rec.threats.empty());
}

TEST_CASE("fast-time and real-time runs emit identical bytes") {
    SynthParams p;
    p.duration_s = 0.5;
    p.rate_hz = 10.0;
    p.n_satellites = 3;
    const auto epochs = synth_trace(p);

    RunConfig fast_cfg;
    fast_cfg.scenario = empty_scenario();
    RunConfig rt_cfg = fast_cfg;
    rt_cfg.mode = RunMode::RealTime;
    rt_cfg.speed_factor = 50.0;

    RunSummary rt_summary;
    const std::string fast_bytes = run_to_string(epochs, fast_cfg);
    const std::string rt_bytes = run_to_string(epochs, rt_cfg, &rt_summary);
    CHECK(fast_bytes == rt_bytes);
    REQUIRE(rt_summary.pacing.has_value());
    CHECK(rt_summary.pacing->samples == epochs.size());
    CHECK(rt_summary.pacing->p99_s >= 0.0);
    CHECK(rt_summary.pacing->max_s >= rt_summary.pacing->p99_s);
}

TEST_CASE("real-time pacing honours the epoch schedule") {
    SynthParams p;
    p.duration_s = 0.5;
    p.rate_hz = 10.0;
    p.n_satellites = 2;
    const auto epochs = synth_trace(p);  // spans 0.4 s of scenario time

    RunConfig cfg;
    cfg.mode = RunMode::RealTime;
    cfg.speed_factor = 1.0;
    cfg.scenario = empty_scenario();

    const auto t0 = std::chrono::steady_clock::now();
    run_to_string(epochs, cfg);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;
    CHECK(elapsed.count() >= 0.38);

    cfg.speed_factor = 0.0;
    std::ostringstream out;
    FdrWriter writer(out);
    CHECK_THROWS_AS(run(vector_source(epochs), cfg, writer), std::invalid_argument);
}

TEST_CASE("an empty source produces an empty run") {
    RunConfig cfg;
    cfg.scenario = empty_scenario();
    RunSummary summary;
    const std::string bytes = run_to_string({}, cfg, &summary);
    CHECK(bytes.empty());
    CHECK(summary.epochs == 0);
    CHECK(summary.records_written == 0);
    CHECK(summary.threat_spans.empty());
}

TEST_CASE("vector_source yields each epoch once, then stays empty") {
    auto src = vector_source(small_trace(3.0));
    CHECK(src()->t == 0.0);
    CHECK(src()->t == 1.0);
    CHECK(src()->t == 2.0);
    CHECK_FALSE(src().has_value());
    CHECK_FALSE(src().has_value());
}
