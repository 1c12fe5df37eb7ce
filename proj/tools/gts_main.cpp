// gts — measurement-level GNSS threat simulator CLI.
//
// Subcommands: run (inject threats into a trace), validate (check a
// scenario file), synth (generate a synthetic trace), export (pull a
// plottable series out of an FDR log).
//
// Exit codes: 0 success; 2 bad input (usage, malformed scenario/trace,
// unknown satellite/band/quantity); 3 runtime failure (output I/O).
// Diagnostics go to stderr only, so `-` output stays clean on stdout.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "gts/engine.hpp"
#include "gts/scenario.hpp"
#include "gts/synth.hpp"
#include "gts/trace_io.hpp"

namespace {

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

LogLevel log_level_from_env() {
    const char* v = std::getenv("GTS_LOG");
    if (v == nullptr) return LogLevel::Info;
    std::string s(v);
    if (s == "quiet") return LogLevel::Quiet;
    if (s == "debug") return LogLevel::Debug;
    return LogLevel::Info;
}

// file-or-stdin / file-or-stdout plumbing; "-" selects the standard stream.
struct InputStream {
    std::ifstream file;
    std::istream* stream = nullptr;
};

InputStream open_input(const std::string& path) {
    InputStream in;
    if (path == "-") {
        in.stream = &std::cin;
        return in;
    }
    in.file.open(path);
    if (!in.file) throw std::invalid_argument("cannot open input file: " + path);
    in.stream = &in.file;
    return in;
}

struct OutputStream {
    std::ofstream file;
    std::ostream* stream = nullptr;
};

OutputStream open_output(const std::string& path) {
    OutputStream out;
    if (path == "-") {
        out.stream = &std::cout;
        return out;
    }
    out.file.open(path);
    if (!out.file) throw std::runtime_error("cannot open output file: " + path);
    out.stream = &out.file;
    return out;
}

std::string slurp(const std::string& path) {
    InputStream in = open_input(path);
    std::ostringstream buf;
    buf << in.stream->rdbuf();
    return buf.str();
}

void print_summary(const gts::RunSummary& s, LogLevel lvl) {
    if (lvl < LogLevel::Info) return;
    std::cerr << "run: " << s.epochs << " epochs, " << s.records_written << " records\n";
    if (!s.threat_spans.empty()) {
        std::cerr << "observed threat spans:\n";
        for (const auto& [tag, span] : s.threat_spans) {
            std::cerr << "  " << tag << ": [" << span.first_t << ", " << span.last_t << "] s\n";
        }
    }
    std::cerr << "obscured satellite-epochs: " << s.obscured_sat_epochs << "\n";
    if (s.pacing) {
        std::cerr << "pacing lateness: p50 " << s.pacing->p50_s * 1e3 << " ms, p99 "
                  << s.pacing->p99_s * 1e3 << " ms, max " << s.pacing->max_s * 1e3 << " ms ("
                  << s.pacing->samples << " epochs)\n";
    }
    if (lvl >= LogLevel::Debug) {
        for (const auto& [band, gain_db] : s.min_gain_db) {
            std::cerr << "min gain " << gts::to_string(band) << ": " << gain_db << " dB\n";
        }
        for (const auto& [sat, drift] : s.max_abs_drift_m) {
            if (drift > 0.0) {
                std::cerr << "max |drift| " << gts::to_string(sat) << ": " << drift << " m\n";
            }
        }
    }
}

struct RunOptions {
    std::string scenario_path;
    std::string trace_path;
    std::string out_path;
    std::string mode = "fast";
    double speed = 1.0;
};

int cmd_run(const RunOptions& o, LogLevel lvl) {
    gts::RunConfig config;
    config.scenario = gts::parse_scenario(slurp(o.scenario_path));
    config.mode = o.mode == "realtime" ? gts::RunMode::RealTime : gts::RunMode::FastTime;
    config.speed_factor = o.speed;

    InputStream trace_in = open_input(o.trace_path);
    gts::TraceReader reader(*trace_in.stream);
    OutputStream out = open_output(o.out_path);
    gts::FdrWriter writer(*out.stream);

    const gts::RunSummary summary =
        gts::run([&reader] { return reader.next(); }, config, writer);

    out.stream->flush();
    if (!*out.stream) throw std::runtime_error("write failure on " + o.out_path);
    print_summary(summary, lvl);
    return 0;
}

int cmd_validate(const std::string& scenario_path, LogLevel lvl) {
    try {
        const gts::ThreatScenario scenario = gts::parse_scenario(slurp(scenario_path));
        if (lvl >= LogLevel::Info) {
            std::cerr << "OK: " << scenario.continuous.size() << " continuous, "
                      << scenario.pulsed.size() << " pulsed, " << scenario.spoofers.size()
                      << " spoofer(s)\n";
        }
        return 0;
    } catch (const gts::ValidationError& e) {
        for (const auto& line : e.errors()) std::cerr << line << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}

struct SynthOptions {
    double duration = 0.0;
    double rate = 0.0;
    int sats = 0;
    std::uint64_t seed = 42;
    std::string out_path;
};

int cmd_synth(const SynthOptions& o, LogLevel lvl) {
    gts::SynthParams params;
    params.duration_s = o.duration;
    params.rate_hz = o.rate;
    params.n_satellites = o.sats;
    params.seed = o.seed;
    const auto epochs = gts::synth_trace(params);

    OutputStream out = open_output(o.out_path);
    gts::TraceWriter writer(*out.stream);
    for (const auto& epoch : epochs) writer.write(epoch);
    out.stream->flush();
    if (!*out.stream) throw std::runtime_error("write failure on " + o.out_path);
    if (lvl >= LogLevel::Info) {
        std::cerr << "synth: " << writer.count() << " epochs, " << o.sats << " satellites\n";
    }
    return 0;
}

struct ExportOptions {
    std::string fdr_path;
    std::string sat;
    std::string band = "L1";
    std::string quantity = "gain";
    std::string out_path;
};

int cmd_export(const ExportOptions& o, LogLevel lvl) {
    gts::PlotSelector sel;
    sel.sat = gts::parse_satellite_id(o.sat);
    sel.band = gts::parse_band(o.band);
    sel.quantity = gts::parse_plot_quantity(o.quantity);

    InputStream fdr_in = open_input(o.fdr_path);
    const gts::PlotSeries series = gts::export_plot_series(*fdr_in.stream, sel);

    OutputStream out = open_output(o.out_path);
    *out.stream << "t," << series.label << "\n";
    std::ostringstream row;
    row.precision(17);
    for (const auto& [t, value] : series.points) {
        row.str("");
        row << t << "," << value << "\n";
        *out.stream << row.str();
    }
    out.stream->flush();
    if (!*out.stream) throw std::runtime_error("write failure on " + o.out_path);
    if (lvl >= LogLevel::Info) {
        std::cerr << "export: " << series.points.size() << " points\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    const LogLevel lvl = log_level_from_env();

    CLI::App app{"gts: measurement-level GNSS jamming & spoofing simulator"};
    app.require_subcommand(1);

    RunOptions run_opts;
    auto* run_cmd = app.add_subcommand("run", "Inject scenario threats into a measurement trace");
    run_cmd->add_option("--scenario", run_opts.scenario_path, "Scenario JSON file")->required();
    run_cmd->add_option("--trace", run_opts.trace_path, "Input trace file ('-' = stdin)")
        ->required();
    run_cmd->add_option("--out", run_opts.out_path, "FDR output file ('-' = stdout)")->required();
    run_cmd->add_option("--mode", run_opts.mode, "Execution mode")
        ->check(CLI::IsMember({"fast", "realtime"}))
        ->default_str("fast");
    run_cmd->add_option("--speed", run_opts.speed, "Real-time speed factor (> 0)")
        ->default_val(1.0);

    std::string validate_scenario;
    auto* validate_cmd = app.add_subcommand("validate", "Validate a scenario file");
    validate_cmd->add_option("--scenario", validate_scenario, "Scenario JSON file")->required();

    SynthOptions synth_opts;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a deterministic synthetic trace");
    synth_cmd->add_option("--duration", synth_opts.duration, "Duration in seconds")->required();
    synth_cmd->add_option("--rate", synth_opts.rate, "Epoch rate in Hz")->required();
    synth_cmd->add_option("--sats", synth_opts.sats, "Number of satellites")->required();
    synth_cmd->add_option("--seed", synth_opts.seed, "RNG seed")->default_val(42);
    synth_cmd->add_option("--out", synth_opts.out_path, "Trace output file ('-' = stdout)")
        ->required();

    ExportOptions export_opts;
    auto* export_cmd = app.add_subcommand("export", "Export a (t, value) CSV series from an FDR");
    export_cmd->add_option("--fdr", export_opts.fdr_path, "FDR file ('-' = stdin)")->required();
    export_cmd->add_option("--sat", export_opts.sat, "Satellite id, e.g. G07")->required();
    export_cmd->add_option("--band", export_opts.band, "Band (L1 or L5)")->default_str("L1");
    export_cmd->add_option("--quantity", export_opts.quantity, "Series to export")
        ->check(CLI::IsMember({"gain", "drift", "deviation", "snr"}))
        ->default_str("gain");
    export_cmd->add_option("--out", export_opts.out_path, "CSV output file ('-' = stdout)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run_opts, lvl);
        if (validate_cmd->parsed()) return cmd_validate(validate_scenario, lvl);
        if (synth_cmd->parsed()) return cmd_synth(synth_opts, lvl);
        if (export_cmd->parsed()) return cmd_export(export_opts, lvl);
    } catch (const gts::ValidationError& e) {
        for (const auto& line : e.errors()) std::cerr << line << "\n";
        return 2;
    } catch (const gts::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
    return 0;
}
