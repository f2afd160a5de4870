#pragma once

#include <cstdint>
#include <vector>

namespace shutter {

/// High-voltage drive pulse shape, time in seconds relative to the trigger
/// edge: zero before it, flat top at v_peak, then exponential decay.
struct DriveWaveform {
    double v_peak = 3200.0;     // V
    double t_flat = 10e-9;      // s
    double tau_decay = 500e-9;  // s
    double jitter_sigma = 1.5e-9;  // s, trigger edge timing spread

    void validate() const;
};

/// Damped oscillation of the cell retardance after a switching event
/// (acoustic resonance of the crystal excited by the voltage step).
struct RingingModel {
    double amplitude = 0.0;    // rad, 0 disables
    double omega = 0.0;        // rad/s
    double tau_damp = 1e-6;    // s
    double phase0 = 0.0;       // rad
    double onset_delay = 0.0;  // s after the trigger edge

    void validate() const;
};

/// Slow per-trigger relaxation memory. Each trigger leaves a residual
/// retardance offset and a residual inter-arm phase, both building up as the
/// drive releases and decaying with tau_recovery. Back-to-back triggers
/// faster than tau_recovery therefore stack.
struct RecoveryModel {
    double tau_recovery = 50e-6;      // s
    double residual_retardance = 0.0; // rad per trigger
    double residual_phase = 0.0;      // rad per trigger, differential arm phase

    void validate() const;
};

/// Everything needed to evaluate the cell at an absolute time: the drive and
/// imperfection models plus the realized (jittered) trigger edge times.
struct CellState {
    DriveWaveform drive;
    RingingModel ringing;
    RecoveryModel recovery;
    double v_halfwave = 3200.0;          // V
    std::vector<double> trigger_times;   // s, strictly increasing

    void validate() const;
};

/// Drive voltage at dt seconds after a trigger edge.
double drive_voltage(const DriveWaveform& w, double dt);

/// Linear electro-optic response: pi * v / v_halfwave.
double retardance_of_voltage(double v, double v_halfwave);

/// Ringing contribution at dt seconds after a trigger edge.
double ringing_retardance(const RingingModel& r, double dt);

/// Total cell retardance at absolute time t: drive + ringing + recovery
/// residuals summed over all past triggers, clamped to [0, 2*pi].
double effective_retardance(const CellState& c, double t);

/// Residual differential phase between the two beam paths through the cell
/// at absolute time t (recovery memory only; zero when residual_phase is 0).
double differential_phase(const CellState& c, double t);

/// Apply Gaussian timing jitter to a strictly increasing schedule.
/// Deterministic for a fixed seed; sigma 0 returns the schedule unchanged.
/// Throws if the jittered times are no longer strictly increasing.
std::vector<double> sample_trigger_times(const std::vector<double>& requested,
                                         double sigma, std::uint64_t seed);

}  // namespace shutter
