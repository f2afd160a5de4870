#pragma once

#include <complex>
#include <utility>

namespace shutter {

using Complex = std::complex<double>;

/// Transverse polarization amplitude pair (horizontal, vertical).
/// Components must be finite; intensity is |h|^2 + |v|^2.
struct JonesVector {
    Complex h{0.0, 0.0};
    Complex v{0.0, 0.0};

    JonesVector() = default;
    JonesVector(Complex h_, Complex v_);

    /// Unit-intensity vector proportional to (h, v). Throws on zero input.
    static JonesVector normalized(Complex h_, Complex v_);

    static JonesVector horizontal() { return {{1.0, 0.0}, {0.0, 0.0}}; }
    static JonesVector vertical() { return {{0.0, 0.0}, {1.0, 0.0}}; }
    static JonesVector diagonal_plus();
    static JonesVector diagonal_minus();
};

/// 2x2 complex polarization transfer matrix, row-major:
///   | hh hv |
///   | vh vv |
struct JonesMatrix {
    Complex hh{1.0, 0.0}, hv{0.0, 0.0};
    Complex vh{0.0, 0.0}, vv{1.0, 0.0};

    JonesMatrix() = default;
    JonesMatrix(Complex hh_, Complex hv_, Complex vh_, Complex vv_);

    static JonesMatrix identity() { return {}; }

    /// True when M†M = I within tol (the matrix neither creates nor absorbs).
    bool is_lossless(double tol = 1e-12) const;
};

double intensity(const JonesVector& v);

JonesVector apply(const JonesMatrix& m, const JonesVector& v);

/// compose(m2, m1) applies m1 first: result = m2 * m1.
JonesMatrix compose(const JonesMatrix& m2, const JonesMatrix& m1);

/// Intensity split against an analyzer aligned with `reference` (which must
/// be normalized): first = |<reference|v>|^2, second = intensity(v) minus
/// that, both clamped to be non-negative. The two always sum to intensity(v).
std::pair<double, double> analyzer_intensities(const JonesVector& v,
                                               const JonesVector& reference);

/// Rotate the first nonzero component onto the positive real axis.
/// The zero vector is returned unchanged. Idempotent.
JonesVector global_phase_normalize(const JonesVector& v);

}  // namespace shutter
