#include "shutter/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "shutter/elements.hpp"
#include "shutter/metrics.hpp"

namespace shutter {

namespace {

constexpr double kLeakageMax = 0.05;
constexpr double kCellTolerance = 1e-6;
constexpr int kMaxRounds = 24;
constexpr int kBisectionSteps = 60;

void check_unit_interval(double value, const char* name, double lo, double hi,
                         bool lo_open, bool hi_open) {
    const bool below = lo_open ? value <= lo : value < lo;
    const bool above = hi_open ? value >= hi : value > hi;
    if (!std::isfinite(value) || below || above) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "calibration target %s = %g out of range %c%g, %g%c",
                      name, value, lo_open ? '(' : '[', lo, hi, hi_open ? ')' : ']');
        throw std::invalid_argument(buf);
    }
}

/// One forward characterization restricted to a single analyzer basis state.
CharacterizationRecord forward_one(const ShutterParams& params, const TriggerConfig& trig,
                                   double trigger_freq, const Protocol& protocol,
                                   const std::string& label) {
    const Device device = build_shutter(params);
    return characterize(device, trig, trigger_freq, {label}, protocol).front();
}

/// Bisection for f(x) == target on [lo, hi] where f is monotone; clamps to
/// the nearer endpoint when the target lies outside the reachable range.
template <typename Fn>
double solve_monotone(Fn&& f, double target, double lo, double hi, bool increasing) {
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (!increasing) {
        std::swap(lo, hi);
        std::swap(f_lo, f_hi);
    }
    if (target <= f_lo) return lo;
    if (target >= f_hi) return hi;
    for (int i = 0; i < kBisectionSteps; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct FitSpec {
    bool fit_tilt = false;
    double f_diag = 1.0;
    double f_hv = 1.0;
    double t_on = 1.0;
    double t_off_h = 0.0;
    double t_off_v = 0.0;
};

struct CellReport {
    const char* name;
    double target;
    double achieved;
};

double worst_residual(const std::vector<CellReport>& cells) {
    double worst = 0.0;
    for (const CellReport& c : cells) worst = std::max(worst, std::abs(c.achieved - c.target));
    return worst;
}

std::string residual_report(const std::vector<CellReport>& cells) {
    std::string out = "calibration did not converge:";
    char buf[160];
    for (const CellReport& c : cells) {
        std::snprintf(buf, sizeof buf, " %s target %.6g achieved %.6g (residual %.3g);",
                      c.name, c.target, c.achieved, std::abs(c.achieved - c.target));
        out += buf;
    }
    out.pop_back();
    return out;
}

/// Shared stage loop. The output-waveplate axis is set once, in closed form:
/// the H/V ON fidelity equals cos^2 of twice the axis offset no matter what
/// the other parameters do, so it never needs a polish pass.
CalibrationResult run_fit(const FitSpec& spec, const TriggerConfig& trig, double trigger_freq,
                          const Protocol& protocol, ShutterParams params) {
    trig.validate();
    protocol.validate();
    if (!(trigger_freq > 0.0)) throw std::invalid_argument("trigger frequency must be positive");

    params.hwp_angle_offset = 0.5 * std::acos(std::sqrt(spec.f_hv));

    auto t_off_h_of = [&](double leak) {
        params.leakage_h = leak;
        return forward_one(params, trig, trigger_freq, protocol, "H").t_off;
    };
    auto t_off_v_of = [&](double leak) {
        params.leakage_v = leak;
        return forward_one(params, trig, trigger_freq, protocol, "V").t_off;
    };

    int rounds = 0;
    for (; rounds < kMaxRounds; ++rounds) {
        const ShutterParams before = params;

        if (spec.fit_tilt) {
            auto f_plus_of_tilt = [&](double tilt) {
                params.tilt_phase = tilt;
                return forward_one(params, trig, trigger_freq, protocol, "+").f_on;
            };
            params.tilt_phase = solve_monotone(f_plus_of_tilt, spec.f_diag, 0.0,
                                               0.99 * std::numbers::pi, /*increasing=*/false);
        }

        params.leakage_h = spec.t_off_h == 0.0
                               ? 0.0
                               : solve_monotone(t_off_h_of, spec.t_off_h, 0.0, kLeakageMax,
                                                /*increasing=*/true);
        params.leakage_v = spec.t_off_v == 0.0
                               ? 0.0
                               : solve_monotone(t_off_v_of, spec.t_off_v, 0.0, kLeakageMax,
                                                /*increasing=*/true);

        const double achieved_t_on = forward_one(params, trig, trigger_freq, protocol, "+").t_on;
        if (achieved_t_on > 0.0) {
            const double pre = params.displacer_transmission * params.displacer_transmission *
                               params.pockels_transmission;
            const double scale = std::cbrt(std::clamp(pre * spec.t_on / achieved_t_on,
                                                      1e-6, 1.0) / pre);
            params.displacer_transmission =
                std::min(1.0, params.displacer_transmission * scale);
            params.pockels_transmission =
                std::min(1.0, params.pockels_transmission * scale);
        }

        const double moved = std::max({std::abs(params.tilt_phase - before.tilt_phase),
                                       std::abs(params.leakage_h - before.leakage_h),
                                       std::abs(params.leakage_v - before.leakage_v),
                                       std::abs(params.displacer_transmission -
                                                before.displacer_transmission)});
        if (rounds > 0 && moved < 1e-12) break;
    }

    CalibrationResult result;
    result.params = params;
    result.achieved = characterize(build_shutter(params), trig, trigger_freq, protocol);
    result.iterations = rounds;

    const CharacterizationRecord& plus = result.achieved[0];
    const CharacterizationRecord& row_h = result.achieved[2];
    const CharacterizationRecord& row_v = result.achieved[3];
    std::vector<CellReport> cells;
    if (spec.fit_tilt) cells.push_back({"f_diag", spec.f_diag, plus.f_on});
    cells.push_back({"f_hv", spec.f_hv, row_h.f_on});
    cells.push_back({"t_on", spec.t_on, plus.t_on});
    cells.push_back({"t_off_h", spec.t_off_h, row_h.t_off});
    cells.push_back({"t_off_v", spec.t_off_v, row_v.t_off});
    result.max_residual = worst_residual(cells);
    if (result.max_residual > kCellTolerance) throw CalibrationError(residual_report(cells));
    return result;
}

}  // namespace

void CalibrationTargets::validate() const {
    check_unit_interval(f_diag, "f_diag", 0.5, 1.0, true, false);
    check_unit_interval(f_hv, "f_hv", 0.0, 1.0, true, false);
    check_unit_interval(t_on, "t_on", 0.0, 1.0, true, false);
    check_unit_interval(t_off_h, "t_off_h", 0.0, 1.0, false, true);
    check_unit_interval(t_off_v, "t_off_v", 0.0, 1.0, false, true);
}

ShutterParams calibrate_losses_and_leakage(double target_t_on, double target_f_hv,
                                           double target_t_off_h, double target_t_off_v,
                                           const TriggerConfig& trig, double trigger_freq,
                                           const Protocol& protocol,
                                           const ShutterParams& start) {
    check_unit_interval(target_f_hv, "f_hv", 0.0, 1.0, true, false);
    check_unit_interval(target_t_on, "t_on", 0.0, 1.0, true, false);
    check_unit_interval(target_t_off_h, "t_off_h", 0.0, 1.0, false, true);
    check_unit_interval(target_t_off_v, "t_off_v", 0.0, 1.0, false, true);
    FitSpec spec;
    spec.fit_tilt = false;
    spec.f_hv = target_f_hv;
    spec.t_on = target_t_on;
    spec.t_off_h = target_t_off_h;
    spec.t_off_v = target_t_off_v;
    return run_fit(spec, trig, trigger_freq, protocol, start).params;
}

CalibrationResult calibrate_shutter(const CalibrationTargets& targets, const TriggerConfig& trig,
                                    double trigger_freq, const Protocol& protocol,
                                    const ShutterParams& start) {
    targets.validate();
    FitSpec spec;
    spec.fit_tilt = true;
    spec.f_diag = targets.f_diag;
    spec.f_hv = targets.f_hv;
    spec.t_on = targets.t_on;
    spec.t_off_h = targets.t_off_h;
    spec.t_off_v = targets.t_off_v;
    ShutterParams seed = start;
    const double cos4g = 2.0 * targets.f_hv - 1.0;
    if (cos4g > 0.0) {
        const double c = std::clamp((2.0 * targets.f_diag - 1.0) / cos4g, -1.0, 1.0);
        seed.tilt_phase = std::acos(c);
    }
    return run_fit(spec, trig, trigger_freq, protocol, seed);
}

}  // namespace shutter
