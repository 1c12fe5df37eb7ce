#pragma once

#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "gts/model.hpp"

namespace gts {

// Which pseudorange the downstream consumer tracks: one band, or the
// dual-frequency ionosphere-free combination of L1/L5.
struct ReceiverKind {
    bool multi_frequency = true;
    Band band = Band::L1;  // meaningful only when !multi_frequency

    static ReceiverKind multi() { return {true, Band::L1}; }
    static ReceiverKind single(Band b) { return {false, b}; }
};

// Constant transmit power for the whole window.
struct NonSmartMode {
    double ssr = 0.0;  // linear spoofing-to-signal ratio
};

// Power ramp (linear in dB) from ssr_min to ssr_max over ramp_duration,
// then held at ssr_max. The receiver locks when the ramp tops out.
struct SmartMode {
    double ssr_min = 0.0;
    double ssr_max = 0.0;
    double ramp_duration = 0.0;  // s
};

struct SpooferConfig {
    TimeWindow window;
    Vec3 position;  // ECEF m, static
    std::variant<NonSmartMode, SmartMode> mode;
    double dt_proc = 0.0;  // s, signal-processing delay
    double dt_ctrl = 0.0;  // s, signal-controlled delay
    double dt_pred = 0.0;  // s, navigation-data prediction offset (0 = meaconing)
    std::vector<SatelliteId> targets;         // empty = all satellites in view
    std::optional<double> max_range = {};     // m, proximity trigger; absent = window-only
    std::map<Band, double> ssr_override = {}; // per-band linear SSR (replaces ssr / ssr_max)

    bool targets_satellite(const SatelliteId& id) const;
};

struct SpooferRuntimeState {
    std::map<SatelliteId, bool> locked;
    double ramp_elapsed = 0.0;          // s into the window
    std::map<Band, double> current_ssr; // linear, 0 outside the window

    bool is_locked(const SatelliteId& id) const;
};

struct DriftResult {
    double drift_m = 0.0;
    bool gated = false;
};

struct SpoofResult {
    bool active = false;
    double delay = 0.0;      // s, spoofing-signal delay
    double deviation = 0.0;  // s, delay - dt_pred
    std::map<Band, double> drift_m;
    std::map<Band, double> spoofed_pseudorange_m;
    std::map<Band, bool> gated;
    std::map<Band, double> ssr;  // linear SSR applied per band (0 when inactive)
    std::optional<double> combined_pseudorange_m;
};

/// Spoofing-signal delay: excess path over the direct satellite-receiver
/// range (never negative, by the triangle inequality) plus processing and
/// control delays.
double spoof_delay(const Vec3& sat_pos, const Vec3& spoofer_pos, const Vec3& rx_pos,
                   double dt_proc, double dt_ctrl);

/// Pseudorange drift for one band. The drift is only produced while the
/// deviation stays within the band's chip period; beyond it the tracking
/// loop cannot follow the spoofed code phase and the drift is cancelled.
DriftResult drift_per_band(double delay, double dt_pred, Band band);

/// Ionosphere-free style dual-frequency combination:
/// rho = rho_L5 / (1 - gamma) - rho_L1 * gamma / (1 - gamma).
double combine_dual_frequency(double rho_l5, double rho_l1, GammaCoefficient gamma);

/// Linear SSR the spoofer radiates at time t on one band; 0 outside the window.
double ssr_at(const SpooferConfig& config, double t, Band band);

/// True when the ramp has reached full power (always true for NonSmartMode
/// inside the window).
bool ramp_complete(const SpooferConfig& config, double t);

/// Window plus optional proximity trigger.
bool spoofer_active(const SpooferConfig& config, double t, const Vec3& rx_pos);

/// Advances lock/ramp state to epoch time t. `active` is the caller's
/// spoofer_active() verdict; `in_view` lists the epoch's satellites. Locks
/// are set once full power is reached, stay set until the window ends, and
/// are cleared outside the window. Call once per epoch in time order.
void update_lock(SpooferRuntimeState& state, const SpooferConfig& config, double t,
                 bool active, std::span<const SatelliteId> in_view);

/// Full per-satellite spoofing result at time t. Inactive or untargeted
/// spoofers yield the identity result (zero drift, zero SSR).
SpoofResult spoof_satellite(const SatelliteObservation& obs, const Vec3& rx_pos,
                            const SpooferConfig& config, const SpooferRuntimeState& state,
                            double t, const ReceiverKind& kind);

}  // namespace gts
