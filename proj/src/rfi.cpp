#include "gts/rfi.hpp"

namespace gts {

double snr_max(const MeasurementEpoch& epoch, Band band) {
    double best = -1.0;
    for (const auto& sat : epoch.satellites) {
        auto it = sat.bands.find(band);
        if (it != sat.bands.end() && it->second.snr > best) best = it->second.snr;
    }
    if (best < 0.0)
        throw std::invalid_argument("band " + to_string(band) + " absent from all satellites");
    return best;
}

double inr_continuous(double snr_max, std::span<const ContinuousInterferer> interferers,
                      Band band, double t) {
    if (snr_max <= 0.0) throw std::invalid_argument("snr_max must be positive");
    double inr = 0.0;
    for (const auto& src : interferers) {
        if (!src.window.contains(t)) continue;
        auto it = src.sir.find(band);
        if (it != src.sir.end()) inr += snr_max / it->second;
    }
    return inr;
}

double inr_pulsed(double snr_max, std::span<const PulsedInterferer> interferers,
                  Band band, double beta, double t) {
    if (snr_max <= 0.0) throw std::invalid_argument("snr_max must be positive");
    if (beta < 0.0 || beta >= 1.0) throw std::invalid_argument("beta must be in [0, 1)");
    double sum = 0.0;
    for (const auto& src : interferers) {
        if (!src.window.contains(t)) continue;
        auto it = src.sir_peak.find(band);
        if (it != src.sir_peak.end()) sum += (snr_max / it->second) * src.duty_cycle;
    }
    return beta > 0.0 ? sum / beta : sum;
}

double spnr(double snr_i, double ssr_i) {
    if (snr_i < 0.0 || ssr_i < 0.0) throw std::invalid_argument("ratios must be non-negative");
    return snr_i * ssr_i;
}

GainBreakdown snr_gain(double inr_c, double inr_p, double spnr_i, double snr_i,
                       double ssr_i, const ReceiverRfConfig& rx, bool locked) {
    if (inr_c < 0.0 || inr_p < 0.0 || spnr_i < 0.0 || snr_i < 0.0 || ssr_i < 0.0)
        throw std::invalid_argument("ratios must be non-negative");
    const double beta = rx.blanker_beta;
    if (beta < 0.0 || beta >= 1.0) throw std::invalid_argument("beta must be in [0, 1)");

    GainBreakdown out;
    out.inr_c = inr_c;
    out.inr_p = inr_p;
    out.spnr = spnr_i;
    if (!locked) {
        out.gain = (1.0 - beta) / (1.0 + inr_c + inr_p + spnr_i);
    } else {
        // Swap rule: the spoofed signal is tracked and the authentic one
        // acts as interference.
        out.gain = (1.0 - beta) * ssr_i / (1.0 + inr_c + inr_p + snr_i);
    }
    out.output_snr = snr_i * out.gain;
    out.obscured = out.output_snr < rx.tracking_threshold;
    return out;
}

}  // namespace gts
