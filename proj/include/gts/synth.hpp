#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gts/model.hpp"

namespace gts {

// Default receiver start point (ECEF m) and motion for synthetic traces.
inline constexpr Vec3 kSynthDefaultStart{4677765.006289855, 1166297.8067879681,
                                         4162751.2302003955};
inline constexpr double kGpsShellRadiusM = 26560e3;
inline constexpr double kGpsAngularRateRadS = 6.283185307179586 / 43082.0;  // ~half sidereal day

enum class TrajectoryKind { Static, Line, Circle };

struct SynthParams {
    double duration_s = 0.0;
    double rate_hz = 0.0;
    int n_satellites = 0;
    std::uint64_t seed = 42;
    TrajectoryKind trajectory = TrajectoryKind::Line;
    Vec3 start = kSynthDefaultStart;
    double speed_mps = 30.0;
    double azimuth_deg = 90.0;        // line heading, clockwise from north
    double circle_radius_m = 2000.0;
    std::map<Band, double> base_snr_db = {{Band::L1, 45.0}, {Band::L5, 45.0}};
    double clock_bias_m = 0.0;
    double shell_radius_m = kGpsShellRadiusM;
    double sat_angular_rate = kGpsAngularRateRadS;  // 0 freezes the constellation
};

/// Receiver position at time t for the configured trajectory.
Vec3 synth_receiver_position(const SynthParams& params, double t);

/// Deterministic synthetic measurement trace: a seeded kinematic
/// constellation on a shell, a moving receiver, pseudorange = geometric
/// range + clock bias, constant per-band SNR. Same params, same bytes.
std::vector<MeasurementEpoch> synth_trace(const SynthParams& params);

}  // namespace gts
