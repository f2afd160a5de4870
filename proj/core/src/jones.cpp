#include "shutter/jones.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shutter {

namespace {

void require_finite(const Complex& c, const char* what) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw std::invalid_argument(std::string(what) + ": component not finite");
    }
}

}  // namespace

JonesVector::JonesVector(Complex h_, Complex v_) : h(h_), v(v_) {
    require_finite(h, "JonesVector");
    require_finite(v, "JonesVector");
}

JonesVector JonesVector::normalized(Complex h_, Complex v_) {
    JonesVector raw{h_, v_};
    const double n = std::sqrt(intensity(raw));
    if (n == 0.0) {
        throw std::invalid_argument("JonesVector::normalized: zero vector");
    }
    return {raw.h / n, raw.v / n};
}

JonesVector JonesVector::diagonal_plus() {
    const double r = std::sqrt(0.5);
    return {{r, 0.0}, {r, 0.0}};
}

JonesVector JonesVector::diagonal_minus() {
    const double r = std::sqrt(0.5);
    return {{r, 0.0}, {-r, 0.0}};
}

JonesMatrix::JonesMatrix(Complex hh_, Complex hv_, Complex vh_, Complex vv_)
    : hh(hh_), hv(hv_), vh(vh_), vv(vv_) {
    require_finite(hh, "JonesMatrix");
    require_finite(hv, "JonesMatrix");
    require_finite(vh, "JonesMatrix");
    require_finite(vv, "JonesMatrix");
}

bool JonesMatrix::is_lossless(double tol) const {
    // M†M entries.
    const Complex a = std::conj(hh) * hh + std::conj(vh) * vh;
    const Complex b = std::conj(hh) * hv + std::conj(vh) * vv;
    const Complex c = std::conj(hv) * hh + std::conj(vv) * vh;
    const Complex d = std::conj(hv) * hv + std::conj(vv) * vv;
    return std::abs(a - 1.0) <= tol && std::abs(b) <= tol &&
           std::abs(c) <= tol && std::abs(d - 1.0) <= tol;
}

double intensity(const JonesVector& v) {
    return std::norm(v.h) + std::norm(v.v);
}

JonesVector apply(const JonesMatrix& m, const JonesVector& v) {
    return {m.hh * v.h + m.hv * v.v, m.vh * v.h + m.vv * v.v};
}

JonesMatrix compose(const JonesMatrix& m2, const JonesMatrix& m1) {
    return {m2.hh * m1.hh + m2.hv * m1.vh, m2.hh * m1.hv + m2.hv * m1.vv,
            m2.vh * m1.hh + m2.vv * m1.vh, m2.vh * m1.hv + m2.vv * m1.vv};
}

std::pair<double, double> analyzer_intensities(const JonesVector& v,
                                               const JonesVector& reference) {
    if (std::abs(intensity(reference) - 1.0) > 1e-9) {
        throw std::invalid_argument(
            "analyzer_intensities: reference must be normalized");
    }
    const double total = intensity(v);
    const Complex overlap = std::conj(reference.h) * v.h + std::conj(reference.v) * v.v;
    double parallel = std::norm(overlap);
    parallel = std::clamp(parallel, 0.0, total);
    return {parallel, total - parallel};
}

JonesVector global_phase_normalize(const JonesVector& v) {
    const Complex pivot = (v.h != Complex{0.0, 0.0}) ? v.h : v.v;
    if (pivot == Complex{0.0, 0.0}) {
        return v;
    }
    const Complex rotation = std::conj(pivot) / std::abs(pivot);
    return {v.h * rotation, v.v * rotation};
}

}  // namespace shutter
