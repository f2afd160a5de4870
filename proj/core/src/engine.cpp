#include "shutter/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>

namespace shutter {

namespace {

void check(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

unsigned thread_budget(std::size_t jobs) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("SHUTTER_SIM_THREADS")) {
        char* end = nullptr;
        const unsigned long cap = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && cap >= 1) {
            hw = static_cast<unsigned>(std::min<unsigned long>(hw, cap));
        }
    }
    if (jobs < hw) hw = static_cast<unsigned>(jobs);
    return hw;
}

/// Run body(0..n-1), possibly on several threads. Each index writes only its
/// own output slot, so scheduling never changes results. The first exception
/// wins and is rethrown on the calling thread.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
    const unsigned threads = thread_budget(n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::scoped_lock lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

void SourceConfig::validate() const {
    check(rep_rate > 0.0, "SourceConfig: rep_rate must be positive");
    check(wavelength > 0.0, "SourceConfig: wavelength must be positive");
    check(bandwidth > 0.0, "SourceConfig: bandwidth must be positive");
    check(intensity > 0.0, "SourceConfig: intensity must be positive");
    if (std::abs(shutter::intensity(polarization) - 1.0) > 1e-9) {
        throw std::invalid_argument("SourceConfig: polarization must be normalized");
    }
}

void TriggerConfig::validate() const {
    drive.validate();
    ringing.validate();
    recovery.validate();
    check(v_halfwave > 0.0, "TriggerConfig: v_halfwave must be positive");
}

CellState make_cell(const TriggerConfig& trig, std::vector<double> trigger_times) {
    CellState cell;
    cell.drive = trig.drive;
    cell.ringing = trig.ringing;
    cell.recovery = trig.recovery;
    cell.v_halfwave = trig.v_halfwave;
    cell.trigger_times = std::move(trigger_times);
    cell.validate();
    return cell;
}

void Protocol::validate() const {
    check(warmup >= 0, "Protocol: warmup must be non-negative");
    check(samples >= 1, "Protocol: samples must be positive");
}

PulseResult simulate_pulse(const Device& device, const CellState& cell,
                           double t, const JonesVector& input) {
    PropagationOptions opt;
    opt.pockels_retardance = effective_retardance(cell, t);
    opt.post_pockels_tilt = differential_phase(cell, t);
    Propagation prop = propagate(device, input, opt);

    PulseResult r;
    r.output = prop.state.amplitude(1);
    r.transmitted = prop.transmitted();
    r.blocked = prop.blocked;
    r.absorbed = prop.absorbed;
    r.retardance = *opt.pockels_retardance;
    r.state = std::move(prop.state);
    return r;
}

TrainResult simulate_train(const Device& device, const CellState& cell,
                           const SourceConfig& source, double duration) {
    source.validate();
    cell.validate();
    check(duration > 0.0, "simulate_train: duration must be positive");

    const std::size_t count =
        static_cast<std::size_t>(std::floor(duration * source.rep_rate)) + 1;
    const double amp = std::sqrt(source.intensity);
    const JonesVector input{source.polarization.h * amp, source.polarization.v * amp};

    TrainResult out;
    out.times.reserve(count);
    out.pulses.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double t = static_cast<double>(k) / source.rep_rate;
        out.times.push_back(t);
        out.pulses.push_back(simulate_pulse(device, cell, t, input));
    }
    return out;
}

std::vector<CharacterizationRecord> characterize(
    const Device& device, const TriggerConfig& trig, double trigger_freq,
    const std::vector<std::string>& labels, const Protocol& protocol) {
    trig.validate();
    protocol.validate();
    check(trigger_freq > 0.0, "characterize: trigger frequency must be positive");
    check(!labels.empty(), "characterize: no polarization labels");

    const double period = 1.0 / trigger_freq;
    const int total = protocol.warmup + protocol.samples;
    std::vector<double> schedule(static_cast<std::size_t>(total));
    for (int k = 0; k < total; ++k) {
        schedule[static_cast<std::size_t>(k)] = static_cast<double>(k) * period;
    }
    const CellState cell = make_cell(
        trig, sample_trigger_times(schedule, trig.drive.jitter_sigma, protocol.seed));

    std::vector<CharacterizationRecord> records;
    records.reserve(labels.size());
    for (const auto& label : labels) {
        const std::string name = canonical_polarization(label);
        const JonesVector input = polarization_state(name);

        double on_par = 0.0, on_perp = 0.0, off_total = 0.0, incident = 0.0;
        for (int k = protocol.warmup; k < total; ++k) {
            const std::size_t idx = static_cast<std::size_t>(k);
            incident += intensity(input);
            // The measured pulse rides the realized edge into the flat top;
            // the OFF pulse sits half a period past the nominal edge, where
            // only slow memory of the cell survives.
            const double t_on = cell.trigger_times[idx] + trig.drive.t_flat / 2.0;
            const double t_off = schedule[idx] + period / 2.0;

            const PulseResult on = simulate_pulse(device, cell, t_on, input);
            const auto [par, perp] = analyzer_split(on.state, input);
            on_par += par;
            on_perp += perp;
            off_total += simulate_pulse(device, cell, t_off, input).transmitted;
        }

        CharacterizationRecord rec;
        rec.polarization = name;
        rec.f_on = fidelity_on(on_par, on_perp);
        rec.t_on = transmittivity(on_par, on_perp, incident);
        rec.t_off = transmittivity(off_total, 0.0, incident);
        records.push_back(std::move(rec));
    }
    std::sort(records.begin(), records.end(),
              [](const CharacterizationRecord& a, const CharacterizationRecord& b) {
                  return a.polarization < b.polarization;
              });
    return records;
}

std::vector<CharacterizationRecord> characterize(const Device& device,
                                                 const TriggerConfig& trig,
                                                 double trigger_freq,
                                                 const Protocol& protocol) {
    return characterize(device, trig, trigger_freq, polarization_labels(), protocol);
}

SweepResult sweep_time_after_trigger(const Device& device,
                                     const TriggerConfig& trig, double start,
                                     double stop, int steps) {
    trig.validate();
    check(start >= 0.0, "sweep_time_after_trigger: start must be non-negative");
    check(stop > start, "sweep_time_after_trigger: stop must exceed start");
    check(steps >= 2, "sweep_time_after_trigger: need at least two samples");

    const CellState cell = make_cell(trig, {0.0});

    SweepResult out;
    out.abscissa_name = "time_s";
    out.abscissa.resize(static_cast<std::size_t>(steps));
    const double step = (stop - start) / static_cast<double>(steps - 1);
    for (int k = 0; k < steps; ++k) {
        out.abscissa[static_cast<std::size_t>(k)] =
            (k == steps - 1) ? stop : start + static_cast<double>(k) * step;
    }

    const auto& labels = polarization_labels();
    const std::vector<std::string> column_names{"t_plus", "t_minus", "t_H", "t_V"};
    for (const auto& name : column_names) {
        out.columns.emplace_back(name,
                                 std::vector<double>(out.abscissa.size(), 0.0));
    }
    out.columns.emplace_back("retardance_rad",
                             std::vector<double>(out.abscissa.size(), 0.0));

    for (std::size_t i = 0; i < out.abscissa.size(); ++i) {
        const double t = out.abscissa[i];
        for (std::size_t p = 0; p < labels.size(); ++p) {
            const JonesVector input = polarization_state(labels[p]);
            const PulseResult pulse = simulate_pulse(device, cell, t, input);
            out.columns[p].second[i] = pulse.transmitted;
            if (p == 0) out.columns[4].second[i] = pulse.retardance;
        }
    }
    return out;
}

SweepResult sweep_trigger_frequency(const Device& device,
                                    const TriggerConfig& trig, double f_min,
                                    double f_max, int steps,
                                    const Protocol& protocol) {
    trig.validate();
    protocol.validate();
    check(f_min > 0.0, "sweep_trigger_frequency: f_min must be positive");
    check(f_max > f_min, "sweep_trigger_frequency: f_max must exceed f_min");
    check(steps >= 2, "sweep_trigger_frequency: need at least two samples");

    SweepResult out;
    out.abscissa_name = "trigger_freq_hz";
    out.seed = protocol.seed;
    out.abscissa.resize(static_cast<std::size_t>(steps));
    const double log_min = std::log(f_min);
    const double log_step = (std::log(f_max) - log_min) / static_cast<double>(steps - 1);
    for (int k = 0; k < steps; ++k) {
        out.abscissa[static_cast<std::size_t>(k)] =
            (k == 0) ? f_min
                     : (k == steps - 1)
                           ? f_max
                           : std::exp(log_min + static_cast<double>(k) * log_step);
    }
    for (std::size_t i = 1; i < out.abscissa.size(); ++i) {
        if (!(out.abscissa[i] > out.abscissa[i - 1])) {
            throw std::invalid_argument(
                "sweep_trigger_frequency: grid too dense to stay increasing");
        }
    }

    const char* metrics[] = {"f_on", "t_on", "t_off"};
    const char* suffixes[] = {"plus", "minus", "H", "V"};
    for (const char* m : metrics) {
        for (const char* s : suffixes) {
            out.columns.emplace_back(std::string(m) + "_" + s,
                                     std::vector<double>(out.abscissa.size(), 0.0));
        }
    }

    parallel_for(out.abscissa.size(), [&](std::size_t i) {
        Protocol point = protocol;
        point.seed = protocol.seed + i;  // derived, order-independent
        const auto records =
            characterize(device, trig, out.abscissa[i], polarization_labels(), point);
        for (std::size_t p = 0; p < records.size(); ++p) {
            out.columns[p].second[i] = records[p].f_on;
            out.columns[4 + p].second[i] = records[p].t_on;
            out.columns[8 + p].second[i] = records[p].t_off;
        }
    });
    return out;
}

}  // namespace shutter
