#pragma once

#include <functional>
#include <map>
#include <optional>

#include "gts/scenario.hpp"
#include "gts/trace_io.hpp"

namespace gts {

enum class RunMode { FastTime, RealTime };

enum class RecordVerbosity { Full, ActiveOnly };

struct RunConfig {
    RunMode mode = RunMode::FastTime;
    double speed_factor = 1.0;  // real-time wall-clock compression, > 0
    ThreatScenario scenario;
    RecordVerbosity verbosity = RecordVerbosity::Full;
};

struct ThreatSpan {
    double first_t = 0.0;
    double last_t = 0.0;
};

struct PacingStats {
    std::size_t samples = 0;
    double p50_s = 0.0;
    double p99_s = 0.0;
    double max_s = 0.0;
};

struct RunSummary {
    std::size_t epochs = 0;
    std::size_t records_written = 0;
    std::map<std::string, ThreatSpan> threat_spans;      // observed, keyed by threat tag
    std::map<SatelliteId, double> max_abs_drift_m;
    std::map<Band, double> min_gain_db;
    std::size_t obscured_sat_epochs = 0;
    std::optional<PacingStats> pacing;  // real-time mode only, lateness vs schedule
};

// All mutable run state: last epoch time plus one runtime state per
// configured spoofer. Reset between runs.
struct EngineState {
    bool has_last_t = false;
    double last_t = 0.0;
    std::vector<SpooferRuntimeState> spoofers;
};

/// Injects the scenario's threats into one epoch. Deterministic: identical
/// epoch, scenario, and prior state give identical records. Epoch times
/// must be non-decreasing across calls.
std::vector<InjectionRecord> step(const MeasurementEpoch& epoch, const ThreatScenario& scenario,
                                  EngineState& state);

using EpochSource = std::function<std::optional<MeasurementEpoch>()>;

EpochSource vector_source(std::vector<MeasurementEpoch> epochs);

/// Drives a whole run. Fast-time consumes epochs as fast as possible;
/// real-time releases each epoch's records no earlier than
/// (epoch.t - first.t) / speed_factor after the run started and records the
/// lateness. Output bytes are identical in both modes. The FDR is flushed
/// after every epoch, so failures propagate with the partial log on disk.
RunSummary run(const EpochSource& source, const RunConfig& config, FdrWriter& out);

}  // namespace gts
