#include "gts/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace gts {

using nlohmann::json;

ValidationError::ValidationError(std::vector<std::string> errors)
    : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

std::string ValidationError::join(const std::vector<std::string>& errors) {
    std::ostringstream out;
    for (size_t i = 0; i < errors.size(); ++i) {
        if (i) out << '\n';
        out << errors[i];
    }
    return out.str();
}

namespace {

// Collects every validation problem before anything is accepted.
class Collector {
public:
    void add(const std::string& path, const std::string& msg) {
        errors_.push_back(path + ": " + msg);
    }
    bool ok() const { return errors_.empty(); }
    void throw_if_failed() {
        if (!ok()) throw ValidationError(std::move(errors_));
    }

private:
    std::vector<std::string> errors_;
};

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed, Collector& errs) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = std::any_of(allowed.begin(), allowed.end(),
                                 [&](const char* k) { return it.key() == k; });
        if (!known) errs.add(path + "." + it.key(), "unknown key");
    }
}

bool want_object(const json& j, const std::string& path, Collector& errs) {
    if (!j.is_object()) {
        errs.add(path, "expected an object");
        return false;
    }
    return true;
}

// Returns NaN (and records an error) when the field is absent or not numeric.
double req_number(const json& obj, const char* key, const std::string& path, Collector& errs) {
    if (!obj.contains(key)) {
        errs.add(path + "." + key, "missing required field");
        return std::numeric_limits<double>::quiet_NaN();
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
        errs.add(path + "." + key, "expected a number");
        return std::numeric_limits<double>::quiet_NaN();
    }
    return v.get<double>();
}

double opt_number(const json& obj, const char* key, double fallback, const std::string& path,
                  Collector& errs) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) {
        errs.add(path + "." + key, "expected a number");
        return fallback;
    }
    return v.get<double>();
}

TimeWindow parse_window(const json& obj, const std::string& path, Collector& errs) {
    TimeWindow w;
    if (!obj.contains("window")) {
        errs.add(path + ".window", "missing required field");
        return w;
    }
    const json& v = obj.at("window");
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        errs.add(path + ".window", "expected [start_s, end_s]");
        return w;
    }
    w.start = v[0].get<double>();
    w.end = v[1].get<double>();
    if (!(w.start < w.end)) errs.add(path + ".window", "window inversion: start must be < end");
    return w;
}

Vec3 parse_position(const json& obj, const char* key, const std::string& path, Collector& errs) {
    Vec3 p;
    if (!obj.contains(key)) {
        errs.add(path + "." + key, "missing required field");
        return p;
    }
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
        !v[2].is_number()) {
        errs.add(path + "." + key, "expected [x, y, z] ECEF meters");
        return p;
    }
    p = Vec3{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    return p;
}

// dB-per-band map, e.g. {"L1": 50.0, "L5": 60.0}; converted to linear.
std::map<Band, double> parse_band_db_map(const json& obj, const char* key,
                                         const std::string& path, Collector& errs,
                                         bool required) {
    std::map<Band, double> out;
    if (!obj.contains(key)) {
        if (required) errs.add(path + "." + key, "missing required field");
        return out;
    }
    const json& v = obj.at(key);
    if (!v.is_object()) {
        errs.add(path + "." + key, "expected {band: dB} object");
        return out;
    }
    for (auto it = v.begin(); it != v.end(); ++it) {
        Band band;
        try {
            band = parse_band(it.key());
        } catch (const std::invalid_argument& e) {
            errs.add(path + "." + key + "." + it.key(), e.what());
            continue;
        }
        if (!it.value().is_number() || !std::isfinite(it.value().get<double>())) {
            errs.add(path + "." + key + "." + it.key(), "expected a finite dB number");
            continue;
        }
        if (out.count(band))
            errs.add(path + "." + key + "." + it.key(), "band aliases the same carrier twice");
        out[band] = db_to_linear(it.value().get<double>());
    }
    if (required && out.empty() && errs.ok())
        errs.add(path + "." + key, "must name at least one band");
    return out;
}

ReceiverRfConfig parse_receiver(const json& doc, ReceiverKind& kind, Collector& errs) {
    ReceiverRfConfig rx;
    if (!doc.contains("receiver")) {
        errs.add("receiver", "missing required field");
        return rx;
    }
    const json& r = doc.at("receiver");
    if (!want_object(r, "receiver", errs)) return rx;
    check_keys(r, "receiver", {"kind", "band", "blanker_beta", "tracking_threshold_db"}, errs);

    std::string kind_name = r.value("kind", std::string{});
    if (kind_name == "multi_frequency") {
        kind = ReceiverKind::multi();
        if (r.contains("band")) errs.add("receiver.band", "only valid for single_frequency");
    } else if (kind_name == "single_frequency") {
        if (!r.contains("band") || !r.at("band").is_string()) {
            errs.add("receiver.band", "single_frequency receivers must name a band");
        } else {
            try {
                kind = ReceiverKind::single(parse_band(r.at("band").get<std::string>()));
            } catch (const std::invalid_argument& e) {
                errs.add("receiver.band", e.what());
            }
        }
    } else {
        errs.add("receiver.kind", "expected 'single_frequency' or 'multi_frequency'");
    }

    rx.blanker_beta = opt_number(r, "blanker_beta", 0.0, "receiver", errs);
    if (!(rx.blanker_beta >= 0.0 && rx.blanker_beta < 1.0))
        errs.add("receiver.blanker_beta", "must be in [0, 1)");

    const double thr_db = opt_number(r, "tracking_threshold_db", 10.0, "receiver", errs);
    if (!std::isfinite(thr_db)) {
        errs.add("receiver.tracking_threshold_db", "must be finite");
    } else {
        rx.tracking_threshold = db_to_linear(thr_db);
    }
    return rx;
}

ContinuousInterferer parse_continuous(const json& j, const std::string& path, Collector& errs) {
    ContinuousInterferer src;
    if (!want_object(j, path, errs)) return src;
    check_keys(j, path, {"window", "sir_db"}, errs);
    src.window = parse_window(j, path, errs);
    src.sir = parse_band_db_map(j, "sir_db", path, errs, true);
    return src;
}

PulsedInterferer parse_pulsed(const json& j, const std::string& path, Collector& errs) {
    PulsedInterferer src;
    if (!want_object(j, path, errs)) return src;
    check_keys(j, path, {"window", "sir_peak_db", "duty_cycle"}, errs);
    src.window = parse_window(j, path, errs);
    src.sir_peak = parse_band_db_map(j, "sir_peak_db", path, errs, true);
    src.duty_cycle = req_number(j, "duty_cycle", path, errs);
    if (!(src.duty_cycle > 0.0 && src.duty_cycle <= 1.0))
        errs.add(path + ".duty_cycle", "must be in (0, 1]");
    return src;
}

SpooferConfig parse_spoofer(const json& j, const std::string& path, Collector& errs) {
    SpooferConfig cfg;
    if (!want_object(j, path, errs)) return cfg;
    check_keys(j, path,
               {"window", "position", "mode", "dt_proc", "dt_ctrl", "dt_pred", "targets",
                "max_range", "ssr_db_override"},
               errs);
    cfg.window = parse_window(j, path, errs);
    cfg.position = parse_position(j, "position", path, errs);

    if (!j.contains("mode") || !j.at("mode").is_object()) {
        errs.add(path + ".mode", "missing mode object");
    } else {
        const json& m = j.at("mode");
        const std::string mode_path = path + ".mode";
        const std::string type = m.value("type", std::string{});
        if (type == "non_smart") {
            check_keys(m, mode_path, {"type", "ssr_db"}, errs);
            const double ssr_db = req_number(m, "ssr_db", mode_path, errs);
            if (std::isfinite(ssr_db)) cfg.mode = NonSmartMode{db_to_linear(ssr_db)};
        } else if (type == "smart") {
            check_keys(m, mode_path, {"type", "ssr_min_db", "ssr_max_db", "ramp_duration"}, errs);
            SmartMode smart;
            const double lo = req_number(m, "ssr_min_db", mode_path, errs);
            const double hi = req_number(m, "ssr_max_db", mode_path, errs);
            smart.ramp_duration = req_number(m, "ramp_duration", mode_path, errs);
            if (std::isfinite(lo)) smart.ssr_min = db_to_linear(lo);
            if (std::isfinite(hi)) smart.ssr_max = db_to_linear(hi);
            if (std::isfinite(lo) && std::isfinite(hi) && lo > hi)
                errs.add(mode_path, "ssr_min_db must not exceed ssr_max_db");
            if (!(smart.ramp_duration > 0.0))
                errs.add(mode_path + ".ramp_duration", "must be > 0");
            cfg.mode = smart;
        } else {
            errs.add(mode_path + ".type", "expected 'non_smart' or 'smart'");
        }
    }

    cfg.dt_proc = opt_number(j, "dt_proc", 0.0, path, errs);
    cfg.dt_ctrl = opt_number(j, "dt_ctrl", 0.0, path, errs);
    cfg.dt_pred = opt_number(j, "dt_pred", 0.0, path, errs);
    if (cfg.dt_proc < 0.0) errs.add(path + ".dt_proc", "must be non-negative");
    if (cfg.dt_ctrl < 0.0) errs.add(path + ".dt_ctrl", "must be non-negative");
    if (!std::isfinite(cfg.dt_pred)) errs.add(path + ".dt_pred", "must be finite");

    if (j.contains("targets")) {
        const json& tg = j.at("targets");
        if (!tg.is_array()) {
            errs.add(path + ".targets", "expected an array of satellite ids");
        } else {
            for (size_t i = 0; i < tg.size(); ++i) {
                const std::string tpath = path + ".targets[" + std::to_string(i) + "]";
                if (!tg[i].is_string()) {
                    errs.add(tpath, "expected a satellite id string");
                    continue;
                }
                try {
                    cfg.targets.push_back(parse_satellite_id(tg[i].get<std::string>()));
                } catch (const std::invalid_argument& e) {
                    errs.add(tpath, e.what());
                }
            }
        }
    }

    if (j.contains("max_range")) {
        const double r = req_number(j, "max_range", path, errs);
        if (!(r > 0.0)) {
            errs.add(path + ".max_range", "must be > 0");
        } else {
            cfg.max_range = r;
        }
    }

    cfg.ssr_override = parse_band_db_map(j, "ssr_db_override", path, errs, false);
    return cfg;
}

// Two spoofers may not address the same satellite at the same time; an
// empty target list means every satellite.
void check_spoofer_overlap(const std::vector<SpooferConfig>& spoofers, Collector& errs) {
    for (size_t i = 0; i < spoofers.size(); ++i) {
        for (size_t k = i + 1; k < spoofers.size(); ++k) {
            const auto& a = spoofers[i];
            const auto& b = spoofers[k];
            if (!a.window.overlaps(b.window)) continue;
            bool conflict = a.targets.empty() || b.targets.empty();
            if (!conflict) {
                for (const auto& id : a.targets) {
                    if (std::find(b.targets.begin(), b.targets.end(), id) != b.targets.end()) {
                        conflict = true;
                        break;
                    }
                }
            }
            if (conflict)
                errs.add("spoofers[" + std::to_string(k) + "]",
                         "targets overlap spoofers[" + std::to_string(i) +
                             "] in time; at most one spoofer may address a satellite");
        }
    }
}

}  // namespace

ThreatScenario parse_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError({std::string("scenario is not valid JSON: ") + e.what()});
    }

    Collector errs;
    ThreatScenario sc;
    if (!doc.is_object()) {
        errs.add("$", "expected a top-level object");
        errs.throw_if_failed();
    }
    check_keys(doc, "$",
               {"schema_version", "description", "receiver", "continuous", "pulsed", "spoofers"},
               errs);

    if (!doc.contains("schema_version") || !doc.at("schema_version").is_number_integer() ||
        doc.at("schema_version").get<int>() != kScenarioSchemaVersion) {
        errs.add("schema_version",
                 "missing or unsupported (expected " + std::to_string(kScenarioSchemaVersion) + ")");
    }
    if (doc.contains("description")) {
        if (doc.at("description").is_string())
            sc.description = doc.at("description").get<std::string>();
        else
            errs.add("description", "expected a string");
    }

    sc.receiver = parse_receiver(doc, sc.receiver_kind, errs);

    for (const char* list_key : {"continuous", "pulsed", "spoofers"}) {
        if (doc.contains(list_key) && !doc.at(list_key).is_array())
            errs.add(list_key, "expected an array");
    }
    if (doc.contains("continuous") && doc.at("continuous").is_array()) {
        const json& arr = doc.at("continuous");
        for (size_t i = 0; i < arr.size(); ++i)
            sc.continuous.push_back(
                parse_continuous(arr[i], "continuous[" + std::to_string(i) + "]", errs));
    }
    if (doc.contains("pulsed") && doc.at("pulsed").is_array()) {
        const json& arr = doc.at("pulsed");
        for (size_t i = 0; i < arr.size(); ++i)
            sc.pulsed.push_back(parse_pulsed(arr[i], "pulsed[" + std::to_string(i) + "]", errs));
    }
    if (doc.contains("spoofers") && doc.at("spoofers").is_array()) {
        const json& arr = doc.at("spoofers");
        for (size_t i = 0; i < arr.size(); ++i)
            sc.spoofers.push_back(
                parse_spoofer(arr[i], "spoofers[" + std::to_string(i) + "]", errs));
    }

    check_spoofer_overlap(sc.spoofers, errs);
    errs.throw_if_failed();
    return sc;
}

ActiveThreatSet active_at(const ThreatScenario& scenario, double t, const Vec3& rx_pos) {
    ActiveThreatSet set;
    set.t = t;
    for (size_t i = 0; i < scenario.continuous.size(); ++i)
        if (scenario.continuous[i].window.contains(t)) set.continuous.push_back(i);
    for (size_t i = 0; i < scenario.pulsed.size(); ++i)
        if (scenario.pulsed[i].window.contains(t)) set.pulsed.push_back(i);
    for (size_t i = 0; i < scenario.spoofers.size(); ++i)
        if (spoofer_active(scenario.spoofers[i], t, rx_pos)) set.spoofers.push_back(i);
    return set;
}

}  // namespace gts
