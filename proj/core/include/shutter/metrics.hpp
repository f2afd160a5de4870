#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shutter/jones.hpp"
#include "shutter/rail_state.hpp"

namespace shutter {

/// One row of the shutter characterization table.
struct CharacterizationRecord {
    std::string polarization;  // "+", "-", "H", or "V"
    double f_on = 0.0;
    double t_on = 0.0;
    double t_off = 0.0;
};

/// Fraction of the analyzed intensity found in the input polarization:
/// i_par / (i_par + i_perp). Throws when both intensities are zero (the
/// fidelity of nothing is undefined) or when either is negative.
double fidelity_on(double i_par, double i_perp);

/// Transmitted fraction of the incident intensity: (i_par + i_perp) / i_in.
/// Throws unless i_in > 0 and the transmitted intensities are non-negative.
double transmittivity(double i_par, double i_perp, double i_in);

/// Intensity split of a multi-rail state against an analyzer aligned with
/// `reference` (which must be normalized): sums analyzer_intensities over
/// the rails. Returns (parallel, perpendicular).
std::pair<double, double> analyzer_split(const RailState& s,
                                         const JonesVector& reference);

/// The four characterization labels in canonical (report) order.
const std::vector<std::string>& polarization_labels();

/// Canonical form of a label: "+", "-", "H", "V". Accepts the aliases
/// "plus", "minus", "h", "v". Throws on anything else.
std::string canonical_polarization(std::string_view label);

/// Unit Jones vector for a (possibly aliased) polarization label.
JonesVector polarization_state(std::string_view label);

/// Means across records, used by the summary report.
double mean_f_on(const std::vector<CharacterizationRecord>& records);
double mean_t_off(const std::vector<CharacterizationRecord>& records);

/// Residual inter-arm phase that makes the ideal device's diagonal-basis
/// fidelity equal the target: 2 * arccos(sqrt(target)). The target must lie
/// in (0.5, 1]; that keeps the inversion single-valued on [0, pi/2).
double calibrate_phase_error(double target_diagonal_fidelity);

}  // namespace shutter
