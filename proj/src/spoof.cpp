#include "gts/spoof.hpp"

#include <algorithm>

namespace gts {

bool SpooferConfig::targets_satellite(const SatelliteId& id) const {
    if (targets.empty()) return true;
    return std::find(targets.begin(), targets.end(), id) != targets.end();
}

bool SpooferRuntimeState::is_locked(const SatelliteId& id) const {
    auto it = locked.find(id);
    return it != locked.end() && it->second;
}

double spoof_delay(const Vec3& sat_pos, const Vec3& spoofer_pos, const Vec3& rx_pos,
                   double dt_proc, double dt_ctrl) {
    if (dt_proc < 0.0 || dt_ctrl < 0.0)
        throw std::invalid_argument("spoofer delays must be non-negative");
    const double d_is = distance(sat_pos, spoofer_pos);
    const double d_sr = distance(spoofer_pos, rx_pos);
    const double d_ir = distance(sat_pos, rx_pos);
    if (d_ir == 0.0 || d_is == 0.0)
        throw std::invalid_argument("degenerate geometry: satellite coincides with receiver or spoofer");
    const double excess = d_is + d_sr - d_ir;
    // excess >= 0 mathematically; rounding may leave a tiny negative residue
    return std::max(excess, 0.0) / kSpeedOfLight + dt_proc + dt_ctrl;
}

DriftResult drift_per_band(double delay, double dt_pred, Band band) {
    const double deviation = delay - dt_pred;
    if (std::abs(deviation) < chip_period(band))
        return {kSpeedOfLight * deviation, false};
    return {0.0, true};
}

double combine_dual_frequency(double rho_l5, double rho_l1, GammaCoefficient gamma) {
    const double g = gamma.value;
    if (g == 1.0) throw std::invalid_argument("singular gamma (identical carrier frequencies)");
    // Difference form of rho_l5/(1-g) - rho_l1*g/(1-g); avoids cancelling
    // two ~1e7 m terms, and combine(rho, rho) == rho exactly.
    return rho_l5 + (rho_l5 - rho_l1) * (g / (1.0 - g));
}

namespace {

double band_ssr_max(const SpooferConfig& cfg, Band band) {
    auto it = cfg.ssr_override.find(band);
    if (it != cfg.ssr_override.end()) return it->second;
    if (const auto* ns = std::get_if<NonSmartMode>(&cfg.mode)) return ns->ssr;
    return std::get<SmartMode>(cfg.mode).ssr_max;
}

}  // namespace

double ssr_at(const SpooferConfig& config, double t, Band band) {
    if (!config.window.contains(t)) return 0.0;
    const double top = band_ssr_max(config, band);
    if (std::holds_alternative<NonSmartMode>(config.mode)) return top;

    const auto& smart = std::get<SmartMode>(config.mode);
    const double frac =
        std::clamp((t - config.window.start) / smart.ramp_duration, 0.0, 1.0);
    const double db_min = linear_to_db(smart.ssr_min);
    const double db_max = linear_to_db(top);
    return db_to_linear(db_min + (db_max - db_min) * frac);
}

bool ramp_complete(const SpooferConfig& config, double t) {
    if (!config.window.contains(t)) return false;
    if (std::holds_alternative<NonSmartMode>(config.mode)) return true;
    return t >= config.window.start + std::get<SmartMode>(config.mode).ramp_duration;
}

bool spoofer_active(const SpooferConfig& config, double t, const Vec3& rx_pos) {
    if (!config.window.contains(t)) return false;
    if (config.max_range && distance(rx_pos, config.position) > *config.max_range) return false;
    return true;
}

void update_lock(SpooferRuntimeState& state, const SpooferConfig& config, double t,
                 bool active, std::span<const SatelliteId> in_view) {
    if (!config.window.contains(t)) {
        state.locked.clear();
        state.ramp_elapsed = 0.0;
        state.current_ssr.clear();
        return;
    }
    state.ramp_elapsed = t - config.window.start;
    for (Band b : kAllBands) state.current_ssr[b] = ssr_at(config, t, b);
    if (active && ramp_complete(config, t)) {
        for (const auto& id : in_view) {
            if (config.targets_satellite(id)) state.locked[id] = true;
        }
    }
}

SpoofResult spoof_satellite(const SatelliteObservation& obs, const Vec3& rx_pos,
                            const SpooferConfig& config, const SpooferRuntimeState& state,
                            double t, const ReceiverKind& kind) {
    (void)state;
    SpoofResult res;
    const bool engaged = spoofer_active(config, t, rx_pos) && config.targets_satellite(obs.id);

    if (engaged) {
        res.active = true;
        res.delay = spoof_delay(obs.position, config.position, rx_pos,
                                config.dt_proc, config.dt_ctrl);
        res.deviation = res.delay - config.dt_pred;
    }

    for (const auto& [band, bobs] : obs.bands) {
        double drift = 0.0;
        bool gated = false;
        double band_ssr = 0.0;
        if (engaged) {
            const DriftResult dr = drift_per_band(res.delay, config.dt_pred, band);
            drift = dr.drift_m;
            gated = dr.gated;
            band_ssr = ssr_at(config, t, band);
        }
        res.drift_m[band] = drift;
        res.gated[band] = gated;
        res.ssr[band] = band_ssr;
        res.spoofed_pseudorange_m[band] = bobs.pseudorange_m + drift;
    }

    if (kind.multi_frequency) {
        auto l1 = res.spoofed_pseudorange_m.find(Band::L1);
        auto l5 = res.spoofed_pseudorange_m.find(Band::L5);
        if (l1 != res.spoofed_pseudorange_m.end() && l5 != res.spoofed_pseudorange_m.end()) {
            res.combined_pseudorange_m = combine_dual_frequency(
                l5->second, l1->second, gamma_coefficient(Band::L1, Band::L5));
        } else if (l1 != res.spoofed_pseudorange_m.end()) {
            res.combined_pseudorange_m = l1->second;
        } else if (l5 != res.spoofed_pseudorange_m.end()) {
            res.combined_pseudorange_m = l5->second;
        }
    } else {
        auto it = res.spoofed_pseudorange_m.find(kind.band);
        if (it != res.spoofed_pseudorange_m.end()) res.combined_pseudorange_m = it->second;
    }
    return res;
}

}  // namespace gts
