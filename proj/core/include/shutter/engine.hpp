#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shutter/drive.hpp"
#include "shutter/elements.hpp"
#include "shutter/metrics.hpp"

namespace shutter {

/// Pulsed laser feeding the shutter. Lengths are in mm, the repetition rate
/// in Hz; wavelength and bandwidth are bookkeeping only (pulses are treated
/// as instantaneous polarized events).
struct SourceConfig {
    double rep_rate = 250e3;      // Hz
    double wavelength = 8e-4;     // mm (800 nm)
    double bandwidth = 1.5e-6;    // mm (1.5 nm)
    std::string polarization_label = "H";
    JonesVector polarization = JonesVector::horizontal();
    double intensity = 1.0;       // reference units per pulse

    void validate() const;
};

/// Trigger electronics and cell imperfection models, without any concrete
/// trigger schedule. A CellState is this plus realized edge times.
struct TriggerConfig {
    DriveWaveform drive;
    RingingModel ringing;
    RecoveryModel recovery;
    double v_halfwave = 3200.0;  // V

    void validate() const;
};

/// Bind a trigger configuration to realized (already jittered) edge times.
CellState make_cell(const TriggerConfig& trig, std::vector<double> trigger_times);

/// Steady-state measurement protocol: discard `warmup` triggers, then
/// average over the next `samples` triggers. The seed feeds trigger jitter.
struct Protocol {
    int warmup = 10;
    int samples = 100;
    std::uint64_t seed = 0;

    void validate() const;
};

/// One laser pulse through the device at a frozen cell retardance.
struct PulseResult {
    JonesVector output;       // amplitude on rail 1 after the full chain
    RailState state;          // complete final state
    double transmitted = 0.0;
    double blocked = 0.0;     // removed by spatial filtering
    double absorbed = 0.0;    // removed by element transmissions
    double retardance = 0.0;  // cell retardance seen by this pulse (rad)
};

/// Evaluate one pulse entering on rail 0 at absolute time t. The cell's
/// retardance and residual inter-arm phase are frozen at t for the pulse.
PulseResult simulate_pulse(const Device& device, const CellState& cell,
                           double t, const JonesVector& input);

/// Pulse train: one entry per laser pulse at k / rep_rate.
struct TrainResult {
    std::vector<double> times;  // s
    std::vector<PulseResult> pulses;
};

/// Simulate floor(duration * rep_rate) + 1 pulses starting at t = 0.
TrainResult simulate_train(const Device& device, const CellState& cell,
                           const SourceConfig& source, double duration);

/// Steady-state F_ON / T_ON / T_OFF per polarization at one trigger
/// frequency. ON pulses ride the (jittered) trigger edge at t_flat / 2 into
/// the flat top; OFF pulses sit half a trigger period after the nominal
/// edge. Records come back sorted in canonical label order.
std::vector<CharacterizationRecord> characterize(
    const Device& device, const TriggerConfig& trig, double trigger_freq,
    const std::vector<std::string>& labels, const Protocol& protocol = {});

/// Same, over the default label set {+, -, H, V}.
std::vector<CharacterizationRecord> characterize(const Device& device,
                                                 const TriggerConfig& trig,
                                                 double trigger_freq,
                                                 const Protocol& protocol = {});

/// Abscissa plus named metric columns, all the same length.
struct SweepResult {
    std::string abscissa_name;
    std::vector<double> abscissa;
    std::vector<std::pair<std::string, std::vector<double>>> columns;
    std::uint64_t seed = 0;
};

/// Transmittivity of each basis polarization versus time since a single
/// trigger at t = 0, on a uniform grid of `steps` points over
/// [start, stop] seconds (jitter does not apply: the grid is the abscissa).
/// Columns: t_plus, t_minus, t_H, t_V, retardance_rad.
SweepResult sweep_time_after_trigger(const Device& device,
                                     const TriggerConfig& trig, double start,
                                     double stop, int steps);

/// Steady-state characterization versus trigger frequency on a log-spaced
/// grid of `steps` points over [f_min, f_max] Hz. Each point runs the full
/// protocol with a per-point seed derived from protocol.seed, so results do
/// not depend on evaluation order; points may run in parallel (capped by
/// the SHUTTER_SIM_THREADS environment variable).
/// Columns: f_on_*, t_on_*, t_off_* for * in {plus, minus, H, V}.
SweepResult sweep_trigger_frequency(const Device& device,
                                    const TriggerConfig& trig, double f_min,
                                    double f_max, int steps,
                                    const Protocol& protocol = {});

}  // namespace shutter
