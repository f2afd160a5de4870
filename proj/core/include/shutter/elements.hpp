#pragma once

#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "shutter/jones.hpp"
#include "shutter/rail_state.hpp"

namespace shutter {

/// Birefringent beam displacer. The horizontal component continues on its
/// rail picking up phase chi_o; the vertical component moves one rail up
/// picking up phase chi_e + tilt_phase and one deviation count. The leakage
/// fractions send amplitude sqrt(leakage) the complementary way with the
/// complementary path phase, polarization unchanged, so the routing conserves
/// intensity; the scalar transmission then attenuates everything.
struct BeamDisplacer {
    double displacement = 4.0;  // mm, lateral rail separation
    double chi_o = 0.0;         // rad, straight (ordinary) path phase
    double chi_e = 0.0;         // rad, displaced (extraordinary) path phase
    double tilt_phase = 0.0;    // rad, added to chi_e; trim for the relative arm phase
    double transmission = 1.0;
    double leakage_h = 0.0;     // fraction of H intensity routed to the displaced path
    double leakage_v = 0.0;     // fraction of V intensity left on the straight path

    void validate() const;
};

/// Fixed retarder: retardance delta at axis angle theta from horizontal.
struct Waveplate {
    double retardance = 0.0;  // rad
    double angle = 0.0;       // rad
    double transmission = 1.0;

    void validate() const;
};

/// Longitudinal Pockels cell snapshot, axis fixed at 45 degrees. The
/// retardance field holds whatever the drive produces at the evaluated
/// instant; the simulation engine substitutes it per pulse.
struct PockelsCell {
    double retardance = 0.0;  // rad
    double transmission = 1.0;

    void validate() const;
};

/// Spatial filter: rails listed here pass untouched, everything else is
/// dropped (and shows up as blocked intensity).
struct Pinhole {
    std::set<int> open_rails{1};

    void validate() const;
};

/// Polarizer with finite extinction: amplitude 1 along `angle`,
/// amplitude sqrt(extinction) along the orthogonal direction.
struct Analyzer {
    double angle = 0.0;       // rad
    double extinction = 0.0;  // intensity fraction passed on the blocked axis
    double transmission = 1.0;

    void validate() const;
};

using Element = std::variant<BeamDisplacer, Waveplate, PockelsCell, Pinhole, Analyzer>;

/// Retarder matrix, convention R(theta) * diag(e^{-i d/2}, e^{+i d/2}) * R(-theta).
/// Quarter-wave multiples of both arguments produce exact matrix entries.
JonesMatrix waveplate_matrix(double retardance, double angle);

struct StepResult {
    RailState state;
    double blocked = 0.0;   // intensity removed by spatial filtering
    double absorbed = 0.0;  // intensity removed by element transmission
};

StepResult apply_element(const Element& e, const RailState& in);

/// Element sequence evaluated front to back. Order is significant.
struct Device {
    std::vector<Element> elements;

    /// Index of the unique PockelsCell. Throws unless exactly one is present.
    std::size_t pockels_index() const;
};

struct ShutterParams {
    double displacement = 4.0;
    double chi_o = 0.0;
    double chi_e = 0.0;
    double tilt_phase = 0.0;       // second displacer only
    double leakage_h = 0.0;        // both displacers
    double leakage_v = 0.0;
    double displacer_transmission = 1.0;
    double pockels_transmission = 1.0;
    double hwp_angle_offset = 0.0;  // rad away from the nominal 45 degrees
    double hwp_transmission = 1.0;
};

/// Canonical shutter: displacer, Pockels cell, displacer, pinhole on rail 1,
/// half-wave plate at 45 degrees (+ offset). Defaults give the ideal device.
Device build_shutter(const ShutterParams& p = {});

struct PropagationOptions {
    /// Substituted into the PockelsCell for this evaluation.
    std::optional<double> pockels_retardance;
    /// Added to the tilt of the first displacer after the PockelsCell
    /// (differential inter-arm phase of a relaxing cell).
    double post_pockels_tilt = 0.0;
};

struct Propagation {
    RailState state;
    double blocked = 0.0;
    double absorbed = 0.0;

    double transmitted() const { return total_intensity(state); }
};

Propagation propagate(const Device& device, const JonesVector& input,
                      const PropagationOptions& opt = {});

}  // namespace shutter
