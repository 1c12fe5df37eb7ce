#pragma once

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace gts {

constexpr double kSpeedOfLight = 299792458.0;  // m/s

// GPS L1 C/A and L5 band constants. Other constellations' signals on the
// same carriers (E1/E5a, B1C/B2a) are mapped onto these two bands.
constexpr double kCarrierL1Hz = 1575.42e6;
constexpr double kCarrierL5Hz = 1176.45e6;
constexpr double kChipPeriodL1 = 1.0 / 1.023e6;  // s, 1.023 Mcps
constexpr double kChipPeriodL5 = 1.0 / 10.23e6;  // s, 10.23 Mcps

enum class Band { L1, L5 };

constexpr std::array<Band, 2> kAllBands{Band::L1, Band::L5};

constexpr double carrier_frequency(Band b) {
    return b == Band::L1 ? kCarrierL1Hz : kCarrierL5Hz;
}

constexpr double chip_period(Band b) {
    return b == Band::L1 ? kChipPeriodL1 : kChipPeriodL5;
}

std::string to_string(Band b);

/// Parses "L1"/"L5" plus the usual per-constellation aliases
/// (E1, B1C -> L1; E5a, B2a -> L5). Throws std::invalid_argument.
Band parse_band(const std::string& name);

/// x_db must be finite.
double db_to_linear(double x_db);

/// x_linear must be finite and > 0.
double linear_to_db(double x_linear);

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    bool operator==(const Vec3& o) const = default;

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec3 normalized() const;
};

double distance(const Vec3& a, const Vec3& b);

/// Squared carrier-frequency ratio of a band pair. Strong type so the
/// dual-frequency combination cannot be fed a raw SIR/SNR by accident.
struct GammaCoefficient {
    double value = 0.0;
};

/// (f_first / f_second)^2. The canonical pair is (L1, L5).
/// Identical bands make the dual-frequency combination singular and are rejected.
GammaCoefficient gamma_coefficient(Band first, Band second);

enum class Constellation { GPS, Galileo, BeiDou };

struct SatelliteId {
    Constellation constellation = Constellation::GPS;
    int prn = 0;

    auto operator<=>(const SatelliteId&) const = default;
};

std::string to_string(const SatelliteId& id);

/// Parses "G19", "E05", "C7" style identifiers.
SatelliteId parse_satellite_id(const std::string& text);

/// Closed time interval [start, end] in seconds since run start.
struct TimeWindow {
    double start = 0.0;
    double end = 0.0;

    bool contains(double t) const { return t >= start && t <= end; }
    bool overlaps(const TimeWindow& o) const { return start <= o.end && o.start <= end; }
};

struct BandObservation {
    double pseudorange_m = 0.0;  // authentic pseudorange
    double snr = 0.0;            // linear power ratio, used by all math
    double snr_db = 0.0;         // as ingested, echoed on reporting paths
};

struct SatelliteObservation {
    SatelliteId id;
    Vec3 position;  // ECEF m
    std::map<Band, BandObservation> bands;

    bool has_band(Band b) const { return bands.count(b) != 0; }
};

struct MeasurementEpoch {
    double t = 0.0;          // s since run start
    Vec3 receiver_position;  // ECEF m
    std::vector<SatelliteObservation> satellites;
};

}  // namespace gts
