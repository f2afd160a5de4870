#include "shutter/drive.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace shutter {

namespace {

void check(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// Beyond this many decay constants every term underflows to exact zero.
constexpr double kDecayCutoff = 750.0;

// Residuals build up as the drive releases; through the flat top they are
// exactly absent, then rise on the drive's own decay constant.
double residual_onset(double dt, const DriveWaveform& w) {
    if (dt <= w.t_flat) return 0.0;
    return 1.0 - std::exp(-(dt - w.t_flat) / w.tau_decay);
}

}  // namespace

void DriveWaveform::validate() const {
    check(v_peak >= 0.0, "DriveWaveform: v_peak must be non-negative");
    check(t_flat >= 0.0, "DriveWaveform: t_flat must be non-negative");
    check(tau_decay > 0.0, "DriveWaveform: tau_decay must be positive");
    check(jitter_sigma >= 0.0, "DriveWaveform: jitter_sigma must be non-negative");
}

void RingingModel::validate() const {
    check(amplitude >= 0.0, "RingingModel: amplitude must be non-negative");
    check(tau_damp > 0.0, "RingingModel: tau_damp must be positive");
    check(onset_delay >= 0.0, "RingingModel: onset_delay must be non-negative");
    check(std::isfinite(omega) && std::isfinite(phase0), "RingingModel: parameter not finite");
}

void RecoveryModel::validate() const {
    check(tau_recovery > 0.0, "RecoveryModel: tau_recovery must be positive");
    check(residual_retardance >= 0.0, "RecoveryModel: residual_retardance must be non-negative");
    check(residual_phase >= 0.0, "RecoveryModel: residual_phase must be non-negative");
}

void CellState::validate() const {
    drive.validate();
    ringing.validate();
    recovery.validate();
    check(v_halfwave > 0.0, "CellState: v_halfwave must be positive");
    for (std::size_t i = 1; i < trigger_times.size(); ++i) {
        check(trigger_times[i] > trigger_times[i - 1],
              "CellState: trigger times must be strictly increasing");
    }
}

double drive_voltage(const DriveWaveform& w, double dt) {
    if (dt < 0.0) return 0.0;
    if (dt <= w.t_flat) return w.v_peak;
    return w.v_peak * std::exp(-(dt - w.t_flat) / w.tau_decay);
}

double retardance_of_voltage(double v, double v_halfwave) {
    if (!(v_halfwave > 0.0)) {
        throw std::invalid_argument("retardance_of_voltage: v_halfwave must be positive");
    }
    // Divide first so v == v_halfwave maps to pi without a rounding detour.
    return std::numbers::pi * (v / v_halfwave);
}

double ringing_retardance(const RingingModel& r, double dt) {
    if (r.amplitude == 0.0 || dt < r.onset_delay) return 0.0;
    const double u = dt - r.onset_delay;
    return r.amplitude * std::exp(-u / r.tau_damp) * std::cos(r.omega * u + r.phase0);
}

namespace {

// Sum f(dt) over past triggers, newest first, stopping once dt exceeds the
// horizon past which every contribution underflows to zero.
template <typename F>
double sum_over_past_triggers(const std::vector<double>& triggers, double t,
                              double horizon, F&& term) {
    auto it = std::upper_bound(triggers.begin(), triggers.end(), t);
    double sum = 0.0;
    while (it != triggers.begin()) {
        --it;
        const double dt = t - *it;
        if (dt > horizon) break;
        sum += term(dt);
    }
    return sum;
}

}  // namespace

double effective_retardance(const CellState& c, double t) {
    const double horizon =
        c.drive.t_flat + c.ringing.onset_delay +
        kDecayCutoff * std::max({c.drive.tau_decay, c.ringing.tau_damp,
                                 c.recovery.tau_recovery});
    const double total = sum_over_past_triggers(
        c.trigger_times, t, horizon, [&](double dt) {
            double r = retardance_of_voltage(drive_voltage(c.drive, dt), c.v_halfwave);
            r += ringing_retardance(c.ringing, dt);
            if (c.recovery.residual_retardance != 0.0) {
                r += c.recovery.residual_retardance *
                     std::exp(-dt / c.recovery.tau_recovery) *
                     residual_onset(dt, c.drive);
            }
            return r;
        });
    return std::clamp(total, 0.0, 2.0 * std::numbers::pi);
}

double differential_phase(const CellState& c, double t) {
    if (c.recovery.residual_phase == 0.0) return 0.0;
    const double horizon = kDecayCutoff * c.recovery.tau_recovery;
    return sum_over_past_triggers(c.trigger_times, t, horizon, [&](double dt) {
        return c.recovery.residual_phase * std::exp(-dt / c.recovery.tau_recovery) *
               residual_onset(dt, c.drive);
    });
}

std::vector<double> sample_trigger_times(const std::vector<double>& requested,
                                         double sigma, std::uint64_t seed) {
    for (std::size_t i = 1; i < requested.size(); ++i) {
        if (!(requested[i] > requested[i - 1])) {
            throw std::invalid_argument(
                "sample_trigger_times: schedule must be strictly increasing");
        }
    }
    if (sigma < 0.0) {
        throw std::invalid_argument("sample_trigger_times: sigma must be non-negative");
    }
    if (sigma == 0.0 || requested.empty()) {
        return requested;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0.0, sigma);
    std::vector<double> out;
    out.reserve(requested.size());
    for (const double t : requested) {
        out.push_back(t + jitter(rng));
    }
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (!(out[i] > out[i - 1])) {
            throw std::runtime_error(
                "sample_trigger_times: jitter produced colliding trigger edges");
        }
    }
    return out;
}

}  // namespace shutter
