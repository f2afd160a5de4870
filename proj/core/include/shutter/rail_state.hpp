#pragma once

#include <map>

#include "shutter/jones.hpp"

namespace shutter {

/// Light distributed over parallel spatial rails.
///
/// Rail indices grow in the beam-displacement direction; rail 0 is the input
/// rail. An absent rail is an exact zero vector. Each rail tracks how many
/// lateral displacements its light has accumulated; amplitudes merging on one
/// rail always agree on that count (every displacement moves light exactly
/// one rail up, so the count equals the net rail offset).
struct RailState {
    struct Rail {
        JonesVector amplitude;
        int deviations = 0;
    };

    std::map<int, Rail> rails;

    /// Transverse spacing (mm) between adjacent rail indices; displacers set
    /// it to their lateral displacement, other elements carry it through.
    double rail_pitch = 4.0;

    static RailState single(int rail, JonesVector amplitude);

    bool has(int rail) const { return rails.count(rail) != 0; }

    /// Amplitude on `rail`; zero vector when absent.
    JonesVector amplitude(int rail) const;

    /// Deviation count on `rail`; 0 when absent.
    int deviations(int rail) const;

    /// Accumulate `add` into `rail`. Dropping exact-zero contributions is the
    /// caller's job; merging asserts deviation-count agreement.
    void accumulate(int rail, const JonesVector& add, int deviation_count);
};

double total_intensity(const RailState& s);

}  // namespace shutter
