#include "gts/trace_io.hpp"

#include <istream>
#include <ostream>
#include <set>

#include <json.hpp>

namespace gts {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty()) return true;
    }
    return false;
}

json parse_line(const std::string& line, std::size_t line_no) {
    try {
        return json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(line_no, std::string("not valid JSON: ") + e.what());
    }
}

void expect_header(const json& j, const char* format, int version, std::size_t line_no) {
    if (!j.is_object() || !j.contains("format"))
        throw ParseError(line_no, std::string("missing header line {\"format\": \"") + format +
                                      "\", \"version\": " + std::to_string(version) + "}");
    if (j.value("format", std::string{}) != format)
        throw ParseError(line_no, "unexpected format '" + j.value("format", std::string{}) +
                                      "', expected '" + format + "'");
    if (!j.contains("version") || !j.at("version").is_number_integer() ||
        j.at("version").get<int>() != version)
        throw ParseError(line_no, "unsupported format version");
}

double number_field(const json& obj, const char* key, std::size_t line_no,
                    const std::string& ctx) {
    if (!obj.contains(key) || !obj.at(key).is_number())
        throw ParseError(line_no, ctx + ": missing or non-numeric '" + key + "'");
    const double v = obj.at(key).get<double>();
    if (!std::isfinite(v)) throw ParseError(line_no, ctx + ": non-finite '" + key + "'");
    return v;
}

Vec3 vec3_field(const json& obj, const char* key, std::size_t line_no, const std::string& ctx) {
    if (!obj.contains(key) || !obj.at(key).is_array() || obj.at(key).size() != 3)
        throw ParseError(line_no, ctx + ": '" + key + "' must be [x, y, z]");
    const json& a = obj.at(key);
    for (int i = 0; i < 3; ++i)
        if (!a[i].is_number() || !std::isfinite(a[i].get<double>()))
            throw ParseError(line_no, ctx + ": '" + key + "' must hold finite numbers");
    return Vec3{a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

MeasurementEpoch parse_epoch(const json& j, std::size_t line_no) {
    if (!j.is_object()) throw ParseError(line_no, "epoch must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "t" && it.key() != "rx" && it.key() != "sats")
            throw ParseError(line_no, "unknown epoch key '" + it.key() + "'");

    MeasurementEpoch epoch;
    epoch.t = number_field(j, "t", line_no, "epoch");
    epoch.receiver_position = vec3_field(j, "rx", line_no, "epoch");

    if (!j.contains("sats") || !j.at("sats").is_array() || j.at("sats").empty())
        throw ParseError(line_no, "epoch needs a non-empty 'sats' array");

    std::set<SatelliteId> seen;
    for (const json& sj : j.at("sats")) {
        if (!sj.is_object()) throw ParseError(line_no, "satellite entry must be an object");
        for (auto it = sj.begin(); it != sj.end(); ++it)
            if (it.key() != "id" && it.key() != "pos" && it.key() != "bands")
                throw ParseError(line_no, "unknown satellite key '" + it.key() + "'");
        if (!sj.contains("id") || !sj.at("id").is_string())
            throw ParseError(line_no, "satellite needs a string 'id'");

        SatelliteObservation obs;
        const std::string id_text = sj.at("id").get<std::string>();
        try {
            obs.id = parse_satellite_id(id_text);
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        }
        if (!seen.insert(obs.id).second)
            throw ParseError(line_no, "duplicate satellite '" + id_text + "'");

        obs.position = vec3_field(sj, "pos", line_no, id_text);
        if (!sj.contains("bands") || !sj.at("bands").is_object() || sj.at("bands").empty())
            throw ParseError(line_no, id_text + ": needs a non-empty 'bands' object");
        for (auto it = sj.at("bands").begin(); it != sj.at("bands").end(); ++it) {
            Band band;
            try {
                band = parse_band(it.key());
            } catch (const std::invalid_argument& e) {
                throw ParseError(line_no, id_text + ": " + e.what());
            }
            const json& bj = it.value();
            if (!bj.is_object())
                throw ParseError(line_no, id_text + ": band entry must be an object");
            for (auto bit = bj.begin(); bit != bj.end(); ++bit)
                if (bit.key() != "pr_m" && bit.key() != "snr_db")
                    throw ParseError(line_no, id_text + ": unknown band key '" + bit.key() + "'");
            BandObservation bo;
            bo.pseudorange_m = number_field(bj, "pr_m", line_no, id_text);
            bo.snr_db = number_field(bj, "snr_db", line_no, id_text);
            bo.snr = db_to_linear(bo.snr_db);
            if (bo.pseudorange_m <= 0.0)
                throw ParseError(line_no, id_text + ": pseudorange must be positive");
            if (obs.bands.count(band))
                throw ParseError(line_no, id_text + ": band given twice");
            obs.bands[band] = bo;
        }
        epoch.satellites.push_back(std::move(obs));
    }
    return epoch;
}

ordered_json vec3_json(const Vec3& v) {
    return ordered_json::array({v.x, v.y, v.z});
}

}  // namespace

std::optional<MeasurementEpoch> TraceReader::next() {
    std::string line;
    if (!header_seen_) {
        if (!next_line(in_, line, line_no_)) return std::nullopt;  // empty trace
        expect_header(parse_line(line, line_no_), kTraceFormatName, kTraceFormatVersion, line_no_);
        header_seen_ = true;
    }
    if (!next_line(in_, line, line_no_)) return std::nullopt;
    MeasurementEpoch epoch = parse_epoch(parse_line(line, line_no_), line_no_);
    if (have_last_t_ && epoch.t <= last_t_)
        throw ParseError(line_no_, "time regression (t = " + std::to_string(epoch.t) +
                                       " after t = " + std::to_string(last_t_) + ")");
    last_t_ = epoch.t;
    have_last_t_ = true;
    return epoch;
}

std::vector<MeasurementEpoch> read_trace(std::istream& in) {
    TraceReader reader(in);
    std::vector<MeasurementEpoch> epochs;
    while (auto epoch = reader.next()) epochs.push_back(std::move(*epoch));
    return epochs;
}

void TraceWriter::write(const MeasurementEpoch& epoch) {
    if (count_ == 0)
        out_ << ordered_json{{"format", kTraceFormatName}, {"version", kTraceFormatVersion}}.dump()
             << '\n';
    ordered_json sats = ordered_json::array();
    for (const auto& sat : epoch.satellites) {
        ordered_json bands = ordered_json::object();
        for (const auto& [band, bo] : sat.bands)
            bands[to_string(band)] = {{"pr_m", bo.pseudorange_m}, {"snr_db", bo.snr_db}};
        sats.push_back({{"id", to_string(sat.id)},
                        {"pos", vec3_json(sat.position)},
                        {"bands", std::move(bands)}});
    }
    out_ << ordered_json{{"t", epoch.t},
                         {"rx", vec3_json(epoch.receiver_position)},
                         {"sats", std::move(sats)}}
                .dump()
         << '\n';
    ++count_;
}

void FdrWriter::write(const InjectionRecord& rec) {
    if (count_ == 0)
        out_ << ordered_json{{"format", kFdrFormatName}, {"version", kFdrFormatVersion}}.dump()
             << '\n';
    ordered_json j{{"t", rec.t},
                   {"sat", to_string(rec.sat)},
                   {"band", to_string(rec.band)},
                   {"gain_db", rec.gain_db},
                   {"snr_in_db", rec.snr_in_db},
                   {"snr_out_db", rec.snr_out_db},
                   {"pr_in_m", rec.pr_in_m},
                   {"pr_out_m", rec.pr_out_m},
                   {"drift_m", rec.drift_m},
                   {"deviation_s", rec.deviation_s}};
    if (rec.combined_pr_m) j["combined_pr_m"] = *rec.combined_pr_m;
    j["locked"] = rec.locked;
    j["obscured"] = rec.obscured;
    j["gated_l1"] = rec.gated_l1;
    j["gated_l5"] = rec.gated_l5;
    j["threats"] = rec.threats;
    out_ << j.dump() << '\n';
    ++count_;
}

void FdrWriter::flush() {
    out_.flush();
}

std::size_t write_fdr(const std::vector<InjectionRecord>& records, std::ostream& out) {
    FdrWriter writer(out);
    for (const auto& rec : records) writer.write(rec);
    writer.flush();
    return writer.count();
}

std::optional<InjectionRecord> FdrReader::next() {
    std::string line;
    if (!header_seen_) {
        if (!next_line(in_, line, line_no_)) return std::nullopt;
        expect_header(parse_line(line, line_no_), kFdrFormatName, kFdrFormatVersion, line_no_);
        header_seen_ = true;
    }
    if (!next_line(in_, line, line_no_)) return std::nullopt;
    const json j = parse_line(line, line_no_);
    if (!j.is_object()) throw ParseError(line_no_, "record must be an object");

    InjectionRecord rec;
    try {
        rec.t = number_field(j, "t", line_no_, "record");
        rec.sat = parse_satellite_id(j.value("sat", std::string{}));
        rec.band = parse_band(j.value("band", std::string{}));
        rec.gain_db = number_field(j, "gain_db", line_no_, "record");
        rec.snr_in_db = number_field(j, "snr_in_db", line_no_, "record");
        rec.snr_out_db = number_field(j, "snr_out_db", line_no_, "record");
        rec.pr_in_m = number_field(j, "pr_in_m", line_no_, "record");
        rec.pr_out_m = number_field(j, "pr_out_m", line_no_, "record");
        rec.drift_m = number_field(j, "drift_m", line_no_, "record");
        rec.deviation_s = number_field(j, "deviation_s", line_no_, "record");
        if (j.contains("combined_pr_m"))
            rec.combined_pr_m = number_field(j, "combined_pr_m", line_no_, "record");
        rec.locked = j.value("locked", false);
        rec.obscured = j.value("obscured", false);
        rec.gated_l1 = j.value("gated_l1", false);
        rec.gated_l5 = j.value("gated_l5", false);
        if (j.contains("threats")) rec.threats = j.at("threats").get<std::vector<std::string>>();
    } catch (const std::invalid_argument& e) {
        throw ParseError(line_no_, e.what());
    } catch (const json::exception& e) {
        throw ParseError(line_no_, e.what());
    }
    return rec;
}

std::vector<InjectionRecord> read_fdr(std::istream& in) {
    FdrReader reader(in);
    std::vector<InjectionRecord> records;
    while (auto rec = reader.next()) records.push_back(std::move(*rec));
    return records;
}

PlotQuantity parse_plot_quantity(const std::string& name) {
    if (name == "gain") return PlotQuantity::Gain;
    if (name == "drift") return PlotQuantity::Drift;
    if (name == "deviation") return PlotQuantity::Deviation;
    if (name == "snr") return PlotQuantity::Snr;
    throw std::invalid_argument("unknown quantity '" + name +
                                "' (expected gain|drift|deviation|snr)");
}

std::string to_string(PlotQuantity q) {
    switch (q) {
        case PlotQuantity::Gain: return "gain_db";
        case PlotQuantity::Drift: return "drift_m";
        case PlotQuantity::Deviation: return "deviation_s";
        case PlotQuantity::Snr: return "snr_out_db";
    }
    return "?";
}

PlotSeries export_plot_series(std::istream& fdr, const PlotSelector& sel) {
    PlotSeries series;
    series.label = to_string(sel.quantity);
    FdrReader reader(fdr);
    std::size_t total = 0;
    while (auto rec = reader.next()) {
        ++total;
        if (rec->sat != sel.sat || rec->band != sel.band) continue;
        double value = 0.0;
        switch (sel.quantity) {
            case PlotQuantity::Gain: value = rec->gain_db; break;
            case PlotQuantity::Drift: value = rec->drift_m; break;
            case PlotQuantity::Deviation: value = rec->deviation_s; break;
            case PlotQuantity::Snr: value = rec->snr_out_db; break;
        }
        series.points.emplace_back(rec->t, value);
    }
    if (total > 0 && series.points.empty())
        throw std::invalid_argument("no records for satellite " + to_string(sel.sat) + " band " +
                                    to_string(sel.band));
    return series;
}

}  // namespace gts
