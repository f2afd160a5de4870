#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "shutter/engine.hpp"

namespace shutter {

/// Target characterization table for the fit. f_diag constrains the "+"/"-"
/// rows, f_hv the "H"/"V" rows, t_on every row; the OFF rows are fitted per
/// basis state. The "+"/"-" OFF cells are not independent knobs: the model
/// pins them to the mean of the H and V ones.
struct CalibrationTargets {
    double f_diag = 0.956;
    double f_hv = 0.998;
    double t_on = 0.991;
    double t_off_h = 0.0050;
    double t_off_v = 0.0020;

    void validate() const;
};

/// Fit failed to reach the targets; the message carries the residual report.
class CalibrationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct CalibrationResult {
    ShutterParams params;
    /// Forward characterization of the fitted device at the fit frequency.
    std::vector<CharacterizationRecord> achieved;
    /// Worst |achieved - target| over the five fitted cells.
    double max_residual = 0.0;
    int iterations = 0;
};

/// Fit leakages, element transmissions, and the output-waveplate axis
/// against the non-interferometric targets, holding the inter-arm phase
/// (start.tilt_phase) fixed. Geometry and path phases are carried over from
/// `start`. Throws CalibrationError when the targets cannot be met.
ShutterParams calibrate_losses_and_leakage(double target_t_on, double target_f_hv,
                                           double target_t_off_h,
                                           double target_t_off_v,
                                           const TriggerConfig& trig,
                                           double trigger_freq,
                                           const Protocol& protocol = {},
                                           const ShutterParams& start = {});

/// Full-table fit: the waveplate axis comes from f_hv in closed form, the
/// inter-arm phase from f_diag by inverting the simulated diagonal fidelity,
/// leakages from the OFF rows, and the pre-pinhole transmission budget from
/// t_on; the stages are iterated until the forward table stops moving.
CalibrationResult calibrate_shutter(const CalibrationTargets& targets,
                                    const TriggerConfig& trig,
                                    double trigger_freq,
                                    const Protocol& protocol = {},
                                    const ShutterParams& start = {});

}  // namespace shutter
