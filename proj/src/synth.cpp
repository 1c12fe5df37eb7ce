#include "gts/synth.hpp"

#include <cmath>
#include <random>

namespace gts {

namespace {

constexpr double kPi = 3.141592653589793;

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Rotation of v about unit axis k by angle a (Rodrigues).
Vec3 rotate(const Vec3& v, const Vec3& k, double a) {
    const double c = std::cos(a);
    const double s = std::sin(a);
    const Vec3 kv = cross(k, v);
    const double kd = k.dot(v);
    return v * c + kv * s + k * (kd * (1.0 - c));
}

// Uniform in [0, 1) from the raw engine; distribution results stay
// identical across standard libraries this way.
double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct LocalFrame {
    Vec3 up, east, north;
};

LocalFrame local_frame(const Vec3& origin) {
    const Vec3 up = origin.normalized();
    Vec3 east = cross(Vec3{0.0, 0.0, 1.0}, up);
    if (east.norm() < 1e-9) east = Vec3{0.0, 1.0, 0.0};  // polar receiver
    east = east.normalized();
    const Vec3 north = cross(up, east);
    return {up, east, north};
}

struct SyntheticSatellite {
    SatelliteId id;
    Vec3 position0;
    Vec3 orbit_axis;
};

std::vector<SyntheticSatellite> make_constellation(const SynthParams& p) {
    std::mt19937_64 rng(p.seed);
    const LocalFrame frame = local_frame(p.start);
    std::vector<SyntheticSatellite> sats;
    sats.reserve(static_cast<size_t>(p.n_satellites));
    for (int i = 0; i < p.n_satellites; ++i) {
        // Keep satellites well above the receiver's horizon: 5..60 degrees
        // off the local vertical.
        const double theta = (5.0 + 55.0 * u01(rng)) * kPi / 180.0;
        const double phi = 2.0 * kPi * u01(rng);
        const Vec3 dir = frame.up * std::cos(theta) +
                         (frame.east * std::cos(phi) + frame.north * std::sin(phi)) *
                             std::sin(theta);
        SyntheticSatellite sat;
        sat.id = SatelliteId{Constellation::GPS, i + 1};
        sat.position0 = dir * p.shell_radius_m;
        // Circular-orbit axis: any unit vector perpendicular to the radius.
        const double ax = 2.0 * kPi * u01(rng);
        Vec3 ref = std::abs(dir.z) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
        const Vec3 t1 = cross(dir, ref).normalized();
        const Vec3 t2 = cross(dir, t1);
        sat.orbit_axis = t1 * std::cos(ax) + t2 * std::sin(ax);
        sats.push_back(sat);
    }
    return sats;
}

void check_params(const SynthParams& p) {
    if (!(p.duration_s > 0.0)) throw std::invalid_argument("duration must be > 0");
    if (!(p.rate_hz > 0.0)) throw std::invalid_argument("rate must be > 0");
    if (p.n_satellites < 1) throw std::invalid_argument("need at least one satellite");
    if (p.base_snr_db.empty()) throw std::invalid_argument("need at least one band SNR");
    if (!(p.shell_radius_m > 0.0)) throw std::invalid_argument("shell radius must be > 0");
    if (p.trajectory != TrajectoryKind::Static && !(p.speed_mps >= 0.0))
        throw std::invalid_argument("speed must be non-negative");
    if (p.trajectory == TrajectoryKind::Circle && !(p.circle_radius_m > 0.0))
        throw std::invalid_argument("circle radius must be > 0");
}

}  // namespace

Vec3 synth_receiver_position(const SynthParams& params, double t) {
    const LocalFrame frame = local_frame(params.start);
    switch (params.trajectory) {
        case TrajectoryKind::Static:
            return params.start;
        case TrajectoryKind::Line: {
            const double az = params.azimuth_deg * kPi / 180.0;
            const Vec3 dir = frame.north * std::cos(az) + frame.east * std::sin(az);
            return params.start + dir * (params.speed_mps * t);
        }
        case TrajectoryKind::Circle: {
            const double omega = params.speed_mps / params.circle_radius_m;
            const double a = omega * t;
            return params.start + frame.east * (params.circle_radius_m * std::sin(a)) +
                   frame.north * (params.circle_radius_m * (std::cos(a) - 1.0));
        }
    }
    return params.start;
}

std::vector<MeasurementEpoch> synth_trace(const SynthParams& params) {
    check_params(params);
    const auto sats = make_constellation(params);
    const auto n_epochs = static_cast<std::size_t>(std::llround(params.duration_s * params.rate_hz));
    if (n_epochs == 0) throw std::invalid_argument("duration and rate give zero epochs");

    std::vector<MeasurementEpoch> epochs;
    epochs.reserve(n_epochs);
    for (std::size_t k = 0; k < n_epochs; ++k) {
        MeasurementEpoch epoch;
        epoch.t = static_cast<double>(k) / params.rate_hz;
        epoch.receiver_position = synth_receiver_position(params, epoch.t);
        for (const auto& sat : sats) {
            SatelliteObservation obs;
            obs.id = sat.id;
            obs.position = rotate(sat.position0, sat.orbit_axis,
                                  params.sat_angular_rate * epoch.t);
            const double range = distance(obs.position, epoch.receiver_position);
            for (const auto& [band, snr_db] : params.base_snr_db) {
                BandObservation bo;
                bo.pseudorange_m = range + params.clock_bias_m;
                bo.snr_db = snr_db;
                bo.snr = db_to_linear(snr_db);
                obs.bands[band] = bo;
            }
            epoch.satellites.push_back(std::move(obs));
        }
        epochs.push_back(std::move(epoch));
    }
    return epochs;
}

}  // namespace gts
