#include "shutter/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace shutter {

double fidelity_on(double i_par, double i_perp) {
    if (i_par < 0.0 || i_perp < 0.0) {
        throw std::invalid_argument("fidelity_on: negative intensity");
    }
    const double total = i_par + i_perp;
    if (total <= 0.0) {
        throw std::domain_error("fidelity_on: no transmitted intensity, fidelity undefined");
    }
    return i_par / total;
}

double transmittivity(double i_par, double i_perp, double i_in) {
    if (i_par < 0.0 || i_perp < 0.0) {
        throw std::invalid_argument("transmittivity: negative intensity");
    }
    if (!(i_in > 0.0)) {
        throw std::invalid_argument("transmittivity: incident intensity must be positive");
    }
    return (i_par + i_perp) / i_in;
}

std::pair<double, double> analyzer_split(const RailState& s,
                                         const JonesVector& reference) {
    double par = 0.0;
    double perp = 0.0;
    for (const auto& [rail, r] : s.rails) {
        const auto [p, q] = analyzer_intensities(r.amplitude, reference);
        par += p;
        perp += q;
    }
    return {par, perp};
}

const std::vector<std::string>& polarization_labels() {
    static const std::vector<std::string> labels{"+", "-", "H", "V"};
    return labels;
}

std::string canonical_polarization(std::string_view label) {
    if (label == "+" || label == "plus") return "+";
    if (label == "-" || label == "minus") return "-";
    if (label == "H" || label == "h") return "H";
    if (label == "V" || label == "v") return "V";
    throw std::invalid_argument("unknown polarization label '" + std::string(label) + "'");
}

JonesVector polarization_state(std::string_view label) {
    const std::string c = canonical_polarization(label);
    if (c == "+") return JonesVector::diagonal_plus();
    if (c == "-") return JonesVector::diagonal_minus();
    if (c == "H") return JonesVector::horizontal();
    return JonesVector::vertical();
}

namespace {

double mean_over(const std::vector<CharacterizationRecord>& records,
                 double CharacterizationRecord::*field) {
    if (records.empty()) {
        throw std::invalid_argument("mean over empty record set");
    }
    double sum = 0.0;
    for (const auto& r : records) sum += r.*field;
    return sum / static_cast<double>(records.size());
}

}  // namespace

double mean_f_on(const std::vector<CharacterizationRecord>& records) {
    return mean_over(records, &CharacterizationRecord::f_on);
}

double mean_t_off(const std::vector<CharacterizationRecord>& records) {
    return mean_over(records, &CharacterizationRecord::t_off);
}

double calibrate_phase_error(double target_diagonal_fidelity) {
    if (!(target_diagonal_fidelity > 0.5 && target_diagonal_fidelity <= 1.0)) {
        throw std::domain_error(
            "calibrate_phase_error: target fidelity must lie in (0.5, 1]");
    }
    return 2.0 * std::acos(std::sqrt(target_diagonal_fidelity));
}

}  // namespace shutter
