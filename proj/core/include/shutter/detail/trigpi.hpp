#pragma once

#include <cmath>
#include <numbers>

namespace shutter::detail {

// Sine/cosine of (pi * x) with exact values at half-integer x.
// Retarder matrices built from these collapse to exact swap/identity forms at
// quarter-wave multiples, which keeps the ideal device chain free of
// ~1e-17 trigonometric residue.

inline double sin_pi(double x) {
    const double k2 = 2.0 * x;
    const double r = std::nearbyint(k2);
    if (r == k2) {
        // x is a multiple of 1/2: cycle 0, 1, 0, -1.
        const long long q = static_cast<long long>(std::fmod(r, 4.0));
        switch ((q % 4 + 4) % 4) {
            case 0: return 0.0;
            case 1: return 1.0;
            case 2: return 0.0;
            default: return -1.0;
        }
    }
    return std::sin(std::numbers::pi * x);
}

inline double cos_pi(double x) {
    const double k2 = 2.0 * x;
    const double r = std::nearbyint(k2);
    if (r == k2) {
        // x is a multiple of 1/2: cycle 1, 0, -1, 0.
        const long long q = static_cast<long long>(std::fmod(r, 4.0));
        switch ((q % 4 + 4) % 4) {
            case 0: return 1.0;
            case 1: return 0.0;
            case 2: return -1.0;
            default: return 0.0;
        }
    }
    return std::cos(std::numbers::pi * x);
}

// sin/cos of an angle given in radians, routed through the half-turn
// representation so angles that are exact multiples of pi/2 (after division
// by double(pi)) produce exact 0/±1.
inline double sin_rad(double angle) { return sin_pi(angle / std::numbers::pi); }
inline double cos_rad(double angle) { return cos_pi(angle / std::numbers::pi); }

}  // namespace shutter::detail
