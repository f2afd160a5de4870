#include <doctest.h>

#include <cmath>
#include <random>

#include "shutter/metrics.hpp"

using shutter::CharacterizationRecord;
using shutter::JonesVector;
using shutter::RailState;

TEST_CASE("fidelity_on is the parallel fraction") {
    CHECK(shutter::fidelity_on(1.0, 0.0) == 1.0);
    CHECK(shutter::fidelity_on(0.0, 1.0) == 0.0);
    CHECK(shutter::fidelity_on(3.0, 1.0) == doctest::Approx(0.75));
    CHECK_THROWS_AS(shutter::fidelity_on(0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(shutter::fidelity_on(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("transmittivity is the transmitted fraction") {
    CHECK(shutter::transmittivity(0.3, 0.2, 1.0) == doctest::Approx(0.5));
    CHECK(shutter::transmittivity(1.0, 0.0, 1.0) == 1.0);
    CHECK_THROWS_AS(shutter::transmittivity(1.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(shutter::transmittivity(-0.1, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("polarization labels canonicalize with aliases") {
    CHECK(shutter::canonical_polarization("plus") == "+");
    CHECK(shutter::canonical_polarization("minus") == "-");
    CHECK(shutter::canonical_polarization("h") == "H");
    CHECK(shutter::canonical_polarization("v") == "V");
    CHECK(shutter::canonical_polarization("+") == "+");
    CHECK_THROWS_AS(shutter::canonical_polarization("D"), std::invalid_argument);
    CHECK_THROWS_AS(shutter::canonical_polarization(""), std::invalid_argument);
}

TEST_CASE("polarization states are unit vectors in the right directions") {
    const JonesVector h = shutter::polarization_state("H");
    CHECK(h.h.real() == 1.0);
    CHECK(h.v == shutter::Complex{0.0, 0.0});
    const JonesVector p = shutter::polarization_state("plus");
    CHECK(p.h.real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(p.h == p.v);
    const JonesVector m = shutter::polarization_state("-");
    CHECK(m.h == -m.v);
}

TEST_CASE("report order is +, -, H, V") {
    const auto& labels = shutter::polarization_labels();
    REQUIRE(labels.size() == 4);
    CHECK(labels[0] == "+");
    CHECK(labels[1] == "-");
    CHECK(labels[2] == "H");
    CHECK(labels[3] == "V");
}

TEST_CASE("calibrate_phase_error matches its closed form") {
    // Frozen: 2 * arccos(sqrt(0.956)), computed offline.
    CHECK(shutter::calibrate_phase_error(0.956) ==
          doctest::Approx(0.4226626048043051).epsilon(1e-14));
    CHECK(shutter::calibrate_phase_error(1.0) == 0.0);
}

TEST_CASE("calibrate_phase_error inverts the fidelity response") {
    // Independent inversion: bisect cos^2(x/2) = target on [0, pi/2).
    auto invert = [](double target) {
        double lo = 0.0, hi = 1.5707963267948966;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            const double c = std::cos(mid / 2.0);
            if (c * c > target) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    };
    std::mt19937 rng(67);
    std::uniform_real_distribution<double> t(0.55, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double target = t(rng);
        CHECK(shutter::calibrate_phase_error(target) ==
              doctest::Approx(invert(target)).epsilon(1e-12));
        // Round trip: the returned phase reproduces the target fidelity.
        const double phase = shutter::calibrate_phase_error(target);
        const double c = std::cos(phase / 2.0);
        CHECK(c * c == doctest::Approx(target).epsilon(1e-12));
    }
}

TEST_CASE("calibrate_phase_error rejects out-of-range targets") {
    CHECK_THROWS_AS(shutter::calibrate_phase_error(0.5), std::domain_error);
    CHECK_THROWS_AS(shutter::calibrate_phase_error(0.2), std::domain_error);
    CHECK_THROWS_AS(shutter::calibrate_phase_error(1.0 + 1e-9), std::domain_error);
}

TEST_CASE("record means") {
    std::vector<CharacterizationRecord> recs(2);
    recs[0].f_on = 0.9;
    recs[0].t_off = 0.004;
    recs[1].f_on = 1.0;
    recs[1].t_off = 0.002;
    CHECK(shutter::mean_f_on(recs) == doctest::Approx(0.95));
    CHECK(shutter::mean_t_off(recs) == doctest::Approx(0.003));
}

TEST_CASE("analyzer_split sums over rails") {
    const JonesVector ref = shutter::polarization_state("H");
    RailState s = RailState::single(0, {{0.6, 0.0}, {0.0, 0.0}});
    s.accumulate(2, {{0.0, 0.0}, {0.8, 0.0}}, 2);
    const auto [par, perp] = shutter::analyzer_split(s, ref);
    CHECK(par == doctest::Approx(0.36).epsilon(1e-14));
    CHECK(perp == doctest::Approx(0.64).epsilon(1e-14));
}
