#include "gts/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

#include "gts/rfi.hpp"
#include "gts/spoof.hpp"

namespace gts {

namespace {

std::string threat_tag(const char* kind, std::size_t index) {
    return std::string(kind) + "[" + std::to_string(index) + "]";
}

// Ionosphere-free combination of the *output* pseudoranges, matching what a
// dual-frequency receiver would form downstream of the injected drifts.
std::optional<double> combined_output(const ReceiverKind& kind,
                                      const std::map<Band, double>& pr_out) {
    if (!kind.multi_frequency) return std::nullopt;
    auto l1 = pr_out.find(Band::L1);
    auto l5 = pr_out.find(Band::L5);
    if (l1 != pr_out.end() && l5 != pr_out.end()) {
        return combine_dual_frequency(l5->second, l1->second,
                                      gamma_coefficient(Band::L1, Band::L5));
    }
    if (l1 != pr_out.end()) return l1->second;
    if (l5 != pr_out.end()) return l5->second;
    return std::nullopt;
}

double percentile(std::vector<double> sorted, double q) {
    if (sorted.empty()) return 0.0;
    const auto n = static_cast<double>(sorted.size());
    auto idx = static_cast<std::size_t>(std::ceil(q * n));
    idx = std::min(std::max<std::size_t>(idx, 1), sorted.size()) - 1;
    return sorted[idx];
}

}  // namespace

std::vector<InjectionRecord> step(const MeasurementEpoch& epoch, const ThreatScenario& scenario,
                                  EngineState& state) {
    if (state.has_last_t && epoch.t < state.last_t) {
        throw std::invalid_argument("time regression: epoch t=" + std::to_string(epoch.t) +
                                    " after t=" + std::to_string(state.last_t));
    }
    state.has_last_t = true;
    state.last_t = epoch.t;
    state.spoofers.resize(scenario.spoofers.size());

    const ActiveThreatSet active = active_at(scenario, epoch.t, epoch.receiver_position);

    std::vector<SatelliteId> in_view;
    in_view.reserve(epoch.satellites.size());
    for (const auto& sat : epoch.satellites) in_view.push_back(sat.id);

    std::vector<bool> spoofer_on(scenario.spoofers.size(), false);
    for (std::size_t i : active.spoofers) spoofer_on[i] = true;
    for (std::size_t i = 0; i < scenario.spoofers.size(); ++i) {
        update_lock(state.spoofers[i], scenario.spoofers[i], epoch.t, spoofer_on[i], in_view);
    }

    // Strongest authentic signal per band drives the interference ratios.
    std::map<Band, double> strongest;
    for (Band band : kAllBands) {
        for (const auto& sat : epoch.satellites) {
            if (sat.bands.count(band) != 0) {
                strongest[band] = snr_max(epoch, band);
                break;
            }
        }
    }

    std::vector<std::string> epoch_tags;
    for (std::size_t i : active.continuous) epoch_tags.push_back(threat_tag("continuous", i));
    for (std::size_t i : active.pulsed) epoch_tags.push_back(threat_tag("pulsed", i));

    std::vector<InjectionRecord> records;
    records.reserve(epoch.satellites.size() * 2);

    for (const auto& sat : epoch.satellites) {
        // Scenario validation guarantees at most one spoofer targets a
        // satellite in any overlapping window; take the first active one.
        std::optional<std::size_t> spoofer_idx;
        for (std::size_t i : active.spoofers) {
            if (scenario.spoofers[i].targets_satellite(sat.id)) {
                spoofer_idx = i;
                break;
            }
        }

        SpoofResult spoof;
        bool locked = false;
        if (spoofer_idx) {
            const auto& cfg = scenario.spoofers[*spoofer_idx];
            auto& rt = state.spoofers[*spoofer_idx];
            spoof = spoof_satellite(sat, epoch.receiver_position, cfg, rt, epoch.t,
                                    scenario.receiver_kind);
            // The capture swap applies only while the spoofed replica is
            // actually on air; the sticky lock flag alone is not enough.
            locked = spoof.active && rt.is_locked(sat.id);
        }

        std::vector<std::string> tags = epoch_tags;
        if (spoofer_idx) tags.push_back(threat_tag("spoofer", *spoofer_idx));

        std::map<Band, double> pr_out;
        for (const auto& [band, obs] : sat.bands) {
            double drift = 0.0;
            if (auto it = spoof.drift_m.find(band); it != spoof.drift_m.end()) drift = it->second;
            pr_out[band] = obs.pseudorange_m + drift;
        }
        const std::optional<double> combined = combined_output(scenario.receiver_kind, pr_out);

        for (const auto& [band, obs] : sat.bands) {
            double ssr = 0.0;
            if (auto it = spoof.ssr.find(band); it != spoof.ssr.end()) ssr = it->second;

            const double inr_c =
                inr_continuous(strongest.at(band), scenario.continuous, band, epoch.t);
            const double inr_p = inr_pulsed(strongest.at(band), scenario.pulsed, band,
                                            scenario.receiver.blanker_beta, epoch.t);
            const double spoof_noise = spnr(obs.snr, ssr);
            const GainBreakdown gb =
                snr_gain(inr_c, inr_p, spoof_noise, obs.snr, ssr, scenario.receiver, locked);

            InjectionRecord rec;
            rec.t = epoch.t;
            rec.sat = sat.id;
            rec.band = band;
            rec.gain_db = linear_to_db(gb.gain);
            rec.snr_in_db = obs.snr_db;
            rec.snr_out_db = obs.snr_db + rec.gain_db;
            rec.pr_in_m = obs.pseudorange_m;
            rec.pr_out_m = pr_out.at(band);
            rec.drift_m = pr_out.at(band) - obs.pseudorange_m;
            rec.deviation_s = spoof.active ? spoof.deviation : 0.0;
            rec.combined_pr_m = combined;
            rec.locked = locked;
            rec.obscured = gb.obscured;
            auto gated = [&](Band b) {
                auto it = spoof.gated.find(b);
                return it != spoof.gated.end() && it->second;
            };
            rec.gated_l1 = gated(Band::L1);
            rec.gated_l5 = gated(Band::L5);
            rec.threats = tags;
            records.push_back(std::move(rec));
        }
    }
    return records;
}

EpochSource vector_source(std::vector<MeasurementEpoch> epochs) {
    return [epochs = std::move(epochs),
            next = std::size_t{0}]() mutable -> std::optional<MeasurementEpoch> {
        if (next >= epochs.size()) return std::nullopt;
        return epochs[next++];
    };
}

RunSummary run(const EpochSource& source, const RunConfig& config, FdrWriter& out) {
    if (config.mode == RunMode::RealTime && !(config.speed_factor > 0.0)) {
        throw std::invalid_argument("speed_factor must be > 0");
    }

    using Clock = std::chrono::steady_clock;
    EngineState state;
    RunSummary summary;
    std::vector<double> lateness;
    Clock::time_point wall_start{};
    std::optional<double> t_first;

    while (auto epoch = source()) {
        auto records = step(*epoch, config.scenario, state);

        if (config.mode == RunMode::RealTime) {
            if (!t_first) {
                t_first = epoch->t;
                wall_start = Clock::now();
            }
            const auto offset =
                std::chrono::duration<double>((epoch->t - *t_first) / config.speed_factor);
            const auto deadline =
                wall_start + std::chrono::duration_cast<Clock::duration>(offset);
            std::this_thread::sleep_until(deadline);
            const std::chrono::duration<double> late = Clock::now() - deadline;
            lateness.push_back(std::max(0.0, late.count()));
        }

        summary.epochs += 1;
        const ActiveThreatSet active = active_at(config.scenario, epoch->t, epoch->receiver_position);
        auto note_span = [&](const std::string& tag) {
            auto [it, fresh] = summary.threat_spans.try_emplace(tag, ThreatSpan{epoch->t, epoch->t});
            if (!fresh) it->second.last_t = epoch->t;
        };
        for (std::size_t i : active.continuous) note_span(threat_tag("continuous", i));
        for (std::size_t i : active.pulsed) note_span(threat_tag("pulsed", i));
        for (std::size_t i : active.spoofers) note_span(threat_tag("spoofer", i));

        std::set<SatelliteId> obscured_sats;
        for (const auto& rec : records) {
            auto [it, fresh] = summary.max_abs_drift_m.try_emplace(rec.sat, std::abs(rec.drift_m));
            if (!fresh) it->second = std::max(it->second, std::abs(rec.drift_m));
            auto [git, gfresh] = summary.min_gain_db.try_emplace(rec.band, rec.gain_db);
            if (!gfresh) git->second = std::min(git->second, rec.gain_db);
            if (rec.obscured) obscured_sats.insert(rec.sat);

            if (config.verbosity == RecordVerbosity::Full || !rec.threats.empty()) {
                out.write(rec);
                summary.records_written += 1;
            }
        }
        summary.obscured_sat_epochs += obscured_sats.size();
        out.flush();
    }

    if (config.mode == RunMode::RealTime) {
        std::sort(lateness.begin(), lateness.end());
        PacingStats stats;
        stats.samples = lateness.size();
        stats.p50_s = percentile(lateness, 0.50);
        stats.p99_s = percentile(lateness, 0.99);
        stats.max_s = lateness.empty() ? 0.0 : lateness.back();
        summary.pacing = stats;
    }
    return summary;
}

}  // namespace gts
