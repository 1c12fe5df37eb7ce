#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gts/rfi.hpp"
#include "gts/spoof.hpp"

namespace gts {

/// Scenario/trace validation failure carrying the full aggregated error
/// list; nothing is accepted partially.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    static std::string join(const std::vector<std::string>& errors);
    std::vector<std::string> errors_;
};

struct ThreatScenario {
    ReceiverRfConfig receiver;
    ReceiverKind receiver_kind = ReceiverKind::multi();
    std::vector<ContinuousInterferer> continuous;
    std::vector<PulsedInterferer> pulsed;
    std::vector<SpooferConfig> spoofers;
    std::string description;
};

/// Threats whose enabling conditions hold at epoch time t (windows for RFI,
/// window plus proximity for spoofers). Holds indices into the scenario.
struct ActiveThreatSet {
    double t = 0.0;
    std::vector<std::size_t> continuous;
    std::vector<std::size_t> pulsed;
    std::vector<std::size_t> spoofers;

    bool any() const { return !continuous.empty() || !pulsed.empty() || !spoofers.empty(); }
};

constexpr int kScenarioSchemaVersion = 1;

/// Parses and validates a scenario document (JSON text). All dB quantities
/// are converted to linear ratios here, once. Throws ValidationError with
/// every problem found; never accepts a partially valid scenario.
ThreatScenario parse_scenario(const std::string& json_text);

ActiveThreatSet active_at(const ThreatScenario& scenario, double t, const Vec3& rx_pos);

}  // namespace gts
