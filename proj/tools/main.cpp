#include <chrono>
#include <clocale>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "shutter/bench.hpp"
#include "shutter/calibrate.hpp"
#include "shutter/engine.hpp"
#include "shutter/metrics.hpp"

namespace {

struct Options {
    std::string bench_path;
    std::string out_path;
    std::uint64_t seed = 0;
    std::string mode;
    std::string range;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open bench file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Write through a temporary file and rename, so readers never observe a
/// half-written output.
void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("short write to '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

void append_csv_number(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    out += buf;
}

void write_manifest(const Options& opt, const char* command,
                    const std::vector<std::string>& outputs, double wall_seconds) {
    nlohmann::json manifest;
    manifest["command"] = command;
    manifest["bench"] = opt.bench_path;
    manifest["seed"] = opt.seed;
    manifest["outputs"] = outputs;
    manifest["version"] = SHUTTER_SIM_VERSION;
    manifest["wall_seconds"] = wall_seconds;
    write_file_atomic(opt.out_path + ".manifest.json", manifest.dump(2) + "\n");
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

shutter::bench::BenchDocument load_document(const std::string& path) {
    return shutter::bench::parse_bench(read_file(path));
}

nlohmann::json records_json(const std::vector<shutter::CharacterizationRecord>& records) {
    nlohmann::json rows = nlohmann::json::array();
    for (const shutter::CharacterizationRecord& r : records) {
        rows.push_back({{"polarization", r.polarization},
                        {"f_on", r.f_on},
                        {"t_on", r.t_on},
                        {"t_off", r.t_off}});
    }
    return rows;
}

int cmd_characterize(const Options& opt) {
    const auto start = std::chrono::steady_clock::now();
    const auto doc = load_document(opt.bench_path);
    const auto setup = shutter::bench::build_setup(doc);
    shutter::Protocol protocol;
    protocol.seed = opt.seed;
    const auto records =
        shutter::characterize(setup.device, setup.trigger, setup.trigger_freq, protocol);

    std::string csv = "polarization,f_on,t_on,t_off\n";
    for (const shutter::CharacterizationRecord& r : records) {
        csv += r.polarization;
        csv += ',';
        append_csv_number(csv, r.f_on);
        csv += ',';
        append_csv_number(csv, r.t_on);
        csv += ',';
        append_csv_number(csv, r.t_off);
        csv += '\n';
    }
    write_file_atomic(opt.out_path, csv);

    nlohmann::json summary;
    summary["trigger_freq_hz"] = setup.trigger_freq;
    summary["records"] = records_json(records);
    summary["mean_f_on"] = shutter::mean_f_on(records);
    summary["mean_t_off"] = shutter::mean_t_off(records);
    const std::string summary_path = opt.out_path + ".summary.json";
    write_file_atomic(summary_path, summary.dump(2) + "\n");
    write_manifest(opt, "characterize", {opt.out_path, summary_path}, seconds_since(start));

    std::printf("polarization   f_on       t_on       t_off\n");
    for (const shutter::CharacterizationRecord& r : records)
        std::printf("%-12s %10.6g %10.6g %10.6g\n", r.polarization.c_str(), r.f_on, r.t_on,
                    r.t_off);
    std::printf("wrote %s\n", opt.out_path.c_str());
    return 0;
}

double parse_strict_double(const std::string& text, const char* what) {
    try {
        size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(what);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("cannot parse ") + what + " '" + text + "'");
    }
}

shutter::bench::SweepSpec resolve_sweep(const Options& opt,
                                        const shutter::bench::BenchSetup& setup) {
    using Mode = shutter::bench::SweepSpec::Mode;
    shutter::bench::SweepSpec spec;

    Mode mode;
    if (!opt.mode.empty()) {
        if (opt.mode != "time" && opt.mode != "frequency")
            throw std::invalid_argument("--mode must be 'time' or 'frequency'");
        mode = opt.mode == "time" ? Mode::Time : Mode::Frequency;
    } else if (setup.sweep) {
        mode = setup.sweep->mode;
    } else {
        mode = Mode::Time;
    }

    if (mode == Mode::Time) {
        spec.mode = Mode::Time;
        spec.from = 0.0;
        spec.to = 6e-6;
        spec.steps = 601;
    } else {
        spec.mode = Mode::Frequency;
        spec.from = 100.0;
        spec.to = 10000.0;
        spec.steps = 17;
    }
    if (setup.sweep && setup.sweep->mode == mode) spec = *setup.sweep;

    if (!opt.range.empty()) {
        const size_t p1 = opt.range.find(':');
        const size_t p2 = p1 == std::string::npos ? p1 : opt.range.find(':', p1 + 1);
        if (p2 == std::string::npos || opt.range.find(':', p2 + 1) != std::string::npos)
            throw std::invalid_argument("--range must be from:to:steps");
        spec.from = parse_strict_double(opt.range.substr(0, p1), "--range start");
        spec.to = parse_strict_double(opt.range.substr(p1 + 1, p2 - p1 - 1), "--range stop");
        const double steps = parse_strict_double(opt.range.substr(p2 + 1), "--range steps");
        if (steps < 2 || steps > 1e6 || steps != static_cast<int>(steps))
            throw std::invalid_argument("--range steps must be an integer in [2, 1000000]");
        spec.steps = static_cast<int>(steps);
    }

    if (!(spec.from < spec.to)) throw std::invalid_argument("sweep range is empty");
    if (mode == Mode::Frequency && spec.from <= 0.0)
        throw std::invalid_argument("frequency sweep range must be positive");
    return spec;
}

int cmd_sweep(const Options& opt) {
    const auto start = std::chrono::steady_clock::now();
    const auto doc = load_document(opt.bench_path);
    const auto setup = shutter::bench::build_setup(doc);
    const auto spec = resolve_sweep(opt, setup);

    shutter::SweepResult result;
    if (spec.mode == shutter::bench::SweepSpec::Mode::Time) {
        result = shutter::sweep_time_after_trigger(setup.device, setup.trigger, spec.from,
                                                   spec.to, spec.steps);
    } else {
        shutter::Protocol protocol;
        protocol.seed = opt.seed;
        result = shutter::sweep_trigger_frequency(setup.device, setup.trigger, spec.from,
                                                  spec.to, spec.steps, protocol);
    }

    std::string csv = result.abscissa_name;
    for (const auto& [name, values] : result.columns) {
        csv += ',';
        csv += name;
    }
    csv += '\n';
    for (size_t i = 0; i < result.abscissa.size(); ++i) {
        append_csv_number(csv, result.abscissa[i]);
        for (const auto& [name, values] : result.columns) {
            csv += ',';
            append_csv_number(csv, values[i]);
        }
        csv += '\n';
    }
    write_file_atomic(opt.out_path, csv);
    write_manifest(opt, "sweep", {opt.out_path}, seconds_since(start));
    std::printf("%zu points, %zu columns; wrote %s\n", result.abscissa.size(),
                result.columns.size() + 1, opt.out_path.c_str());
    return 0;
}

int cmd_calibrate(const Options& opt) {
    const auto start = std::chrono::steady_clock::now();
    const auto doc = load_document(opt.bench_path);
    const auto setup = shutter::bench::build_setup(doc);
    if (!setup.targets)
        throw std::invalid_argument("bench file has no targets section to calibrate against");
    if (!shutter::bench::has_canonical_layout(doc))
        throw std::invalid_argument(
            "calibration requires the device layout: displacer, pockels, displacer, "
            "pinhole rails=[1], hwp");

    shutter::ShutterParams params;
    const auto& d1 = std::get<shutter::BeamDisplacer>(setup.device.elements[0]);
    params.displacement = d1.displacement;
    params.chi_o = d1.chi_o;
    params.chi_e = d1.chi_e;

    shutter::Protocol protocol;
    protocol.seed = opt.seed;
    const auto fit = shutter::calibrate_shutter(*setup.targets, setup.trigger,
                                                setup.trigger_freq, protocol, params);

    const auto out_doc = shutter::bench::apply_calibration(doc, fit.params);
    write_file_atomic(opt.out_path, shutter::bench::serialize_bench(out_doc));

    nlohmann::json summary;
    summary["params"] = {{"tilt_phase", fit.params.tilt_phase},
                         {"leakage_h", fit.params.leakage_h},
                         {"leakage_v", fit.params.leakage_v},
                         {"displacer_transmission", fit.params.displacer_transmission},
                         {"pockels_transmission", fit.params.pockels_transmission},
                         {"hwp_angle_offset", fit.params.hwp_angle_offset}};
    summary["achieved"] = records_json(fit.achieved);
    summary["max_residual"] = fit.max_residual;
    summary["iterations"] = fit.iterations;
    const std::string summary_path = opt.out_path + ".summary.json";
    write_file_atomic(summary_path, summary.dump(2) + "\n");
    write_manifest(opt, "calibrate", {opt.out_path, summary_path}, seconds_since(start));

    std::printf("fit converged in %d rounds, max residual %.3g\n", fit.iterations,
                fit.max_residual);
    std::printf("  tilt_phase=%.6g rad  leak_h=%.6g  leak_v=%.6g\n", fit.params.tilt_phase,
                fit.params.leakage_h, fit.params.leakage_v);
    std::printf("  displacer_transmission=%.6g  pockels_transmission=%.6g  hwp_offset=%.6g "
                "rad\n",
                fit.params.displacer_transmission, fit.params.pockels_transmission,
                fit.params.hwp_angle_offset);
    std::printf("wrote %s\n", opt.out_path.c_str());
    return 0;
}

int cmd_validate(const Options& opt) {
    const auto doc = load_document(opt.bench_path);
    const auto setup = shutter::bench::build_setup(doc);
    std::printf("OK: %s\n", opt.bench_path.c_str());
    std::printf("  %zu device elements, trigger at %.6g Hz, source %s at %.6g Hz\n",
                setup.device.elements.size(), setup.trigger_freq,
                setup.source.polarization_label.c_str(), setup.source.rep_rate);
    if (setup.sweep)
        std::printf("  sweep: %s, %d steps\n",
                    setup.sweep->mode == shutter::bench::SweepSpec::Mode::Time ? "time"
                                                                               : "frequency",
                    setup.sweep->steps);
    if (setup.targets) std::printf("  calibration targets present\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");

    CLI::App app{"optical shutter simulator: characterize, sweep, and calibrate "
                 "dual-displacer shutter benches"};
    app.set_version_flag("--version", SHUTTER_SIM_VERSION);
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--bench", opt.bench_path, "bench description file")->required();
        sub->add_option("--seed", opt.seed, "random seed for trigger jitter");
        sub->add_option("--out", opt.out_path, "output path");
    };

    CLI::App* characterize =
        app.add_subcommand("characterize", "steady-state fidelity/transmittivity table");
    add_common(characterize);
    CLI::App* sweep = app.add_subcommand("sweep", "metrics versus time or trigger frequency");
    add_common(sweep);
    sweep->add_option("--mode", opt.mode, "abscissa: time or frequency");
    sweep->add_option("--range", opt.range,
                      "from:to:steps in SI units (seconds or hertz), overriding the bench "
                      "sweep section");
    CLI::App* calibrate =
        app.add_subcommand("calibrate", "fit device parameters to the bench targets");
    add_common(calibrate);
    CLI::App* validate = app.add_subcommand("validate", "parse and check a bench file");
    validate->add_option("--bench", opt.bench_path, "bench description file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (opt.out_path.empty()) {
        if (*characterize) opt.out_path = "characterize.csv";
        if (*sweep) opt.out_path = "sweep.csv";
        if (*calibrate) opt.out_path = "calibrated.bench";
    }

    try {
        if (*characterize) return cmd_characterize(opt);
        if (*sweep) return cmd_sweep(opt);
        if (*calibrate) return cmd_calibrate(opt);
        if (*validate) return cmd_validate(opt);
    } catch (const shutter::bench::ParseError& e) {
        const shutter::bench::Diagnostic& d = e.diagnostics().front();
        std::fprintf(stderr, "%s:%d:%d: error: %s\n", opt.bench_path.c_str(), d.line,
                     d.column, d.message.c_str());
        return 2;
    } catch (const shutter::CalibrationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
