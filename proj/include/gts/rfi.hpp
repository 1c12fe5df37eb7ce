#pragma once

#include <map>
#include <span>
#include <vector>

#include "gts/model.hpp"

namespace gts {

// A jamming-style emitter radiating continuously inside its window.
// SIR values are linear signal-to-interference ratios per band; a band
// absent from the map is unaffected by this source.
struct ContinuousInterferer {
    TimeWindow window;
    std::map<Band, double> sir;
};

// A pulsed emitter (transponder, DME, VHF) with per-band peak SIR and a
// duty cycle in (0, 1].
struct PulsedInterferer {
    TimeWindow window;
    std::map<Band, double> sir_peak;
    double duty_cycle = 0.0;
};

struct ReceiverRfConfig {
    double blanker_beta = 0.0;         // in [0, 1); 0 = blanker disabled
    double tracking_threshold = 10.0;  // linear output SNR below which a satellite is obscured
};

// Per satellite/band decomposition of the SNR gain.
struct GainBreakdown {
    double inr_c = 0.0;
    double inr_p = 0.0;
    double spnr = 0.0;
    double gain = 1.0;        // linear overall gain applied to the input SNR
    double output_snr = 0.0;  // linear
    bool obscured = false;
};

/// Maximum authentic SNR over the epoch's satellites on one band.
/// Always taken over authentic values, never post-lock swapped ones.
double snr_max(const MeasurementEpoch& epoch, Band band);

/// Continuous interference-to-noise ratio at time t. Simultaneous sources
/// are power-additive: per-source INRs are summed.
double inr_continuous(double snr_max, std::span<const ContinuousInterferer> interferers,
                      Band band, double t);

/// Pulsed interference-to-noise ratio at time t. With the blanker enabled
/// (beta > 0) the duty-weighted sum is scaled by 1/beta; with the blanker
/// disabled (beta == 0) pulses are not excised and contribute their
/// duty-weighted power directly.
double inr_pulsed(double snr_max, std::span<const PulsedInterferer> interferers,
                  Band band, double beta, double t);

/// Spoofing-power-to-noise ratio: SNR_i * SSR_i.
double spnr(double snr_i, double ssr_i);

/// Overall SNR gain for one satellite/band. Pre-lock the gain is
/// (1-beta)/(1 + INR_c + INR_p + SPNR). Once the receiver is locked by the
/// spoofer, SNR_i and SPNR_i swap roles: the correlator tracks the spoofed
/// signal, so the reported output SNR becomes
/// (1-beta) * SPNR / (1 + INR_c + INR_p + SNR_i).
GainBreakdown snr_gain(double inr_c, double inr_p, double spnr_i, double snr_i,
                       double ssr_i, const ReceiverRfConfig& rx, bool locked);

}  // namespace gts
