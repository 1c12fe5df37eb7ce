#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gts/model.hpp"
#include "gts/scenario.hpp"

namespace gts {

/// Malformed trace/FDR content; the message carries the line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

constexpr const char* kTraceFormatName = "gts.trace";
constexpr const char* kFdrFormatName = "gts.fdr";
constexpr int kTraceFormatVersion = 1;
constexpr int kFdrFormatVersion = 1;

// One FDR row: the threat-injection outcome for (epoch, satellite, band).
struct InjectionRecord {
    double t = 0.0;
    SatelliteId sat;
    Band band = Band::L1;
    double gain_db = 0.0;
    double snr_in_db = 0.0;
    double snr_out_db = 0.0;
    double pr_in_m = 0.0;
    double pr_out_m = 0.0;
    double drift_m = 0.0;
    double deviation_s = 0.0;
    std::optional<double> combined_pr_m;  // dual-frequency combination, multi-frequency runs
    bool locked = false;
    bool obscured = false;
    bool gated_l1 = false;
    bool gated_l5 = false;
    std::vector<std::string> threats;  // active-threat tags, e.g. "continuous[0]"
};

/// Lazily yields validated epochs from a line-delimited trace stream.
/// Epochs must be strictly increasing in time; the first line must be the
/// format header (an entirely empty stream is an empty trace).
class TraceReader {
public:
    explicit TraceReader(std::istream& in) : in_(in) {}

    /// Next epoch, or nullopt at end of stream. Throws ParseError.
    std::optional<MeasurementEpoch> next();

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
    bool header_seen_ = false;
    bool have_last_t_ = false;
    double last_t_ = 0.0;
};

std::vector<MeasurementEpoch> read_trace(std::istream& in);

/// Writes the line-delimited trace format. The header line is emitted
/// before the first epoch; an unused writer leaves the sink empty.
class TraceWriter {
public:
    explicit TraceWriter(std::ostream& out) : out_(out) {}
    void write(const MeasurementEpoch& epoch);
    std::size_t count() const { return count_; }

private:
    std::ostream& out_;
    std::size_t count_ = 0;
};

/// Writes FDR records, one JSON object per line, header before the first
/// record. flush() is cheap and called by the engine once per epoch.
class FdrWriter {
public:
    explicit FdrWriter(std::ostream& out) : out_(out) {}
    void write(const InjectionRecord& rec);
    void flush();
    std::size_t count() const { return count_; }

private:
    std::ostream& out_;
    std::size_t count_ = 0;
};

std::size_t write_fdr(const std::vector<InjectionRecord>& records, std::ostream& out);

class FdrReader {
public:
    explicit FdrReader(std::istream& in) : in_(in) {}
    std::optional<InjectionRecord> next();

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
    bool header_seen_ = false;
};

std::vector<InjectionRecord> read_fdr(std::istream& in);

enum class PlotQuantity { Gain, Drift, Deviation, Snr };

PlotQuantity parse_plot_quantity(const std::string& name);
std::string to_string(PlotQuantity q);

struct PlotSelector {
    SatelliteId sat;
    Band band = Band::L1;
    PlotQuantity quantity = PlotQuantity::Gain;
};

struct PlotSeries {
    std::string label;  // column name for the value
    std::vector<std::pair<double, double>> points;  // (t, value)
};

/// Extracts a (t, value) series for one satellite/band/quantity from an FDR
/// stream. A selector that matches nothing in a non-empty FDR is an error;
/// an empty FDR yields an empty series.
PlotSeries export_plot_series(std::istream& fdr, const PlotSelector& sel);

}  // namespace gts
