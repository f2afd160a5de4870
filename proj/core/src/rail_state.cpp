#include "shutter/rail_state.hpp"

#include <stdexcept>

namespace shutter {

RailState RailState::single(int rail, JonesVector amplitude) {
    RailState s;
    s.rails.emplace(rail, Rail{amplitude, 0});
    return s;
}

JonesVector RailState::amplitude(int rail) const {
    const auto it = rails.find(rail);
    return it == rails.end() ? JonesVector{} : it->second.amplitude;
}

int RailState::deviations(int rail) const {
    const auto it = rails.find(rail);
    return it == rails.end() ? 0 : it->second.deviations;
}

void RailState::accumulate(int rail, const JonesVector& add, int deviation_count) {
    auto [it, inserted] = rails.try_emplace(rail, Rail{add, deviation_count});
    if (inserted) {
        return;
    }
    if (it->second.deviations != deviation_count) {
        // Cannot happen for +1 displacements, which is what keeps the two
        // recombined arms temporally matched; guard it anyway.
        throw std::logic_error("RailState: deviation count mismatch on merge");
    }
    it->second.amplitude.h += add.h;
    it->second.amplitude.v += add.v;
}

double total_intensity(const RailState& s) {
    double sum = 0.0;
    for (const auto& [rail, r] : s.rails) {
        sum += intensity(r.amplitude);
    }
    return sum;
}

}  // namespace shutter
