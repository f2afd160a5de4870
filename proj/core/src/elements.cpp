#include "shutter/elements.hpp"

#include <cmath>
#include <stdexcept>

#include "shutter/detail/trigpi.hpp"

namespace shutter {

namespace {

void check(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

void check_transmission(double t, const char* who) {
    if (!(t > 0.0 && t <= 1.0)) {
        throw std::invalid_argument(std::string(who) + ": transmission outside (0, 1]");
    }
}

Complex phase_factor(double angle) {
    return {detail::cos_rad(angle), detail::sin_rad(angle)};
}

}  // namespace

void BeamDisplacer::validate() const {
    check(displacement > 0.0, "BeamDisplacer: displacement must be positive");
    check(std::isfinite(chi_o) && std::isfinite(chi_e) && std::isfinite(tilt_phase),
          "BeamDisplacer: phase not finite");
    check_transmission(transmission, "BeamDisplacer");
    check(leakage_h >= 0.0 && leakage_h <= 0.05, "BeamDisplacer: leakage_h outside [0, 0.05]");
    check(leakage_v >= 0.0 && leakage_v <= 0.05, "BeamDisplacer: leakage_v outside [0, 0.05]");
}

void Waveplate::validate() const {
    check(std::isfinite(retardance) && std::isfinite(angle), "Waveplate: parameter not finite");
    check_transmission(transmission, "Waveplate");
}

void PockelsCell::validate() const {
    check(std::isfinite(retardance), "PockelsCell: retardance not finite");
    check_transmission(transmission, "PockelsCell");
}

void Pinhole::validate() const {
    check(!open_rails.empty(), "Pinhole: no open rails");
}

void Analyzer::validate() const {
    check(std::isfinite(angle), "Analyzer: angle not finite");
    check(extinction >= 0.0 && extinction <= 1.0, "Analyzer: extinction outside [0, 1]");
    check_transmission(transmission, "Analyzer");
}

JonesMatrix waveplate_matrix(double retardance, double angle) {
    const double t = retardance / std::numbers::pi;
    const double u = angle / std::numbers::pi;
    const double c = detail::cos_pi(t / 2.0);
    const double s = detail::sin_pi(t / 2.0);
    const double c2t = detail::cos_pi(2.0 * u);
    const double s2t = detail::sin_pi(2.0 * u);
    return {Complex{c, -s * c2t}, Complex{0.0, -s * s2t},
            Complex{0.0, -s * s2t}, Complex{c, s * c2t}};
}

namespace {

StepResult apply_displacer(const BeamDisplacer& d, const RailState& in) {
    d.validate();
    const double tr = std::sqrt(d.transmission);
    const double stay_h = std::sqrt(1.0 - d.leakage_h) * tr;
    const double leak_h = std::sqrt(d.leakage_h) * tr;
    const double move_v = std::sqrt(1.0 - d.leakage_v) * tr;
    const double leak_v = std::sqrt(d.leakage_v) * tr;
    const Complex straight = phase_factor(d.chi_o);
    const Complex displaced = phase_factor(d.chi_e + d.tilt_phase);

    StepResult out;
    out.state.rail_pitch = d.displacement;
    const Complex zero{0.0, 0.0};
    for (const auto& [rail, r] : in.rails) {
        const Complex& h = r.amplitude.h;
        const Complex& v = r.amplitude.v;
        if (h != zero) {
            out.state.accumulate(rail, {h * stay_h * straight, zero}, r.deviations);
            if (leak_h != 0.0) {
                out.state.accumulate(rail + 1, {h * leak_h * displaced, zero},
                                     r.deviations + 1);
            }
        }
        if (v != zero) {
            out.state.accumulate(rail + 1, {zero, v * move_v * displaced},
                                 r.deviations + 1);
            if (leak_v != 0.0) {
                out.state.accumulate(rail, {zero, v * leak_v * straight}, r.deviations);
            }
        }
    }
    out.absorbed = total_intensity(in) - total_intensity(out.state);
    return out;
}

StepResult apply_retarder(const JonesMatrix& m, double transmission, const RailState& in) {
    const double tr = std::sqrt(transmission);
    StepResult out;
    out.state.rail_pitch = in.rail_pitch;
    for (const auto& [rail, r] : in.rails) {
        JonesVector a = apply(m, r.amplitude);
        a.h *= tr;
        a.v *= tr;
        out.state.accumulate(rail, a, r.deviations);
    }
    out.absorbed = total_intensity(in) - total_intensity(out.state);
    return out;
}

StepResult apply_pinhole(const Pinhole& p, const RailState& in) {
    p.validate();
    StepResult out;
    out.state.rail_pitch = in.rail_pitch;
    for (const auto& [rail, r] : in.rails) {
        if (p.open_rails.count(rail) != 0) {
            out.state.accumulate(rail, r.amplitude, r.deviations);
        } else {
            out.blocked += intensity(r.amplitude);
        }
    }
    return out;
}

JonesMatrix analyzer_matrix(const Analyzer& a) {
    const double u = a.angle / std::numbers::pi;
    const double c = detail::cos_pi(u);
    const double s = detail::sin_pi(u);
    const double e = std::sqrt(a.extinction);
    // |pass><pass| + sqrt(extinction) |stop><stop|
    return {Complex{c * c + e * s * s, 0.0}, Complex{s * c * (1.0 - e), 0.0},
            Complex{s * c * (1.0 - e), 0.0}, Complex{s * s + e * c * c, 0.0}};
}

}  // namespace

StepResult apply_element(const Element& e, const RailState& in) {
    return std::visit(
        [&](const auto& elem) -> StepResult {
            using T = std::decay_t<decltype(elem)>;
            if constexpr (std::is_same_v<T, BeamDisplacer>) {
                return apply_displacer(elem, in);
            } else if constexpr (std::is_same_v<T, Waveplate>) {
                elem.validate();
                return apply_retarder(waveplate_matrix(elem.retardance, elem.angle),
                                      elem.transmission, in);
            } else if constexpr (std::is_same_v<T, PockelsCell>) {
                elem.validate();
                return apply_retarder(
                    waveplate_matrix(elem.retardance, std::numbers::pi / 4.0),
                    elem.transmission, in);
            } else if constexpr (std::is_same_v<T, Pinhole>) {
                return apply_pinhole(elem, in);
            } else {
                elem.validate();
                return apply_retarder(analyzer_matrix(elem), elem.transmission, in);
            }
        },
        e);
}

std::size_t Device::pockels_index() const {
    std::size_t found = elements.size();
    std::size_t count = 0;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (std::holds_alternative<PockelsCell>(elements[i])) {
            found = i;
            ++count;
        }
    }
    if (count != 1) {
        throw std::logic_error("Device: expected exactly one PockelsCell");
    }
    return found;
}

Device build_shutter(const ShutterParams& p) {
    BeamDisplacer first;
    first.displacement = p.displacement;
    first.chi_o = p.chi_o;
    first.chi_e = p.chi_e;
    first.transmission = p.displacer_transmission;
    first.leakage_h = p.leakage_h;
    first.leakage_v = p.leakage_v;

    BeamDisplacer second = first;
    second.tilt_phase = p.tilt_phase;

    PockelsCell cell;
    cell.transmission = p.pockels_transmission;

    Waveplate hwp;
    hwp.retardance = std::numbers::pi;
    hwp.angle = std::numbers::pi / 4.0 + p.hwp_angle_offset;
    hwp.transmission = p.hwp_transmission;

    Device d;
    d.elements = {first, cell, second, Pinhole{}, hwp};
    return d;
}

Propagation propagate(const Device& device, const JonesVector& input,
                      const PropagationOptions& opt) {
    const Complex zero{0.0, 0.0};
    if (input.h == zero && input.v == zero) {
        throw std::invalid_argument("propagate: zero input");
    }
    std::size_t pockels_at = device.elements.size();
    if (opt.pockels_retardance || opt.post_pockels_tilt != 0.0) {
        pockels_at = device.pockels_index();
    }

    RailState state = RailState::single(0, input);
    Propagation result;
    bool tilt_pending = false;
    for (std::size_t i = 0; i < device.elements.size(); ++i) {
        const Element* e = &device.elements[i];
        Element substituted;
        if (i == pockels_at && opt.pockels_retardance) {
            PockelsCell cell = std::get<PockelsCell>(*e);
            cell.retardance = *opt.pockels_retardance;
            substituted = cell;
            e = &substituted;
        } else if (i > pockels_at && tilt_pending &&
                   std::holds_alternative<BeamDisplacer>(*e)) {
            BeamDisplacer d = std::get<BeamDisplacer>(*e);
            d.tilt_phase += opt.post_pockels_tilt;
            substituted = d;
            e = &substituted;
            tilt_pending = false;
        }
        StepResult step = apply_element(*e, state);
        state = std::move(step.state);
        result.blocked += step.blocked;
        result.absorbed += step.absorbed;
        if (i == pockels_at && opt.post_pockels_tilt != 0.0) {
            tilt_pending = true;
        }
    }
    result.state = std::move(state);
    return result;
}

}  // namespace shutter
