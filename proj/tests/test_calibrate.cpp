#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shutter/calibrate.hpp"

using shutter::CalibrationResult;
using shutter::CalibrationTargets;
using shutter::Device;
using shutter::ShutterParams;
using shutter::TriggerConfig;

namespace {

TriggerConfig imperfect_trigger() {
    TriggerConfig trig;
    trig.ringing.amplitude = 0.5;
    trig.ringing.omega = 2.0 * std::numbers::pi * 400e3;
    trig.ringing.tau_damp = 1200e-9;
    trig.ringing.onset_delay = 20e-9;
    trig.recovery.residual_retardance = 0.05;
    trig.recovery.residual_phase = 0.15;
    return trig;
}

}  // namespace

TEST_CASE("target validation enforces the physical ranges") {
    CalibrationTargets t;
    CHECK_NOTHROW(t.validate());
    t.f_diag = 0.5;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    t = {};
    t.f_hv = 1.5;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    t = {};
    t.t_on = 0.0;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    t = {};
    t.t_off_h = 1.0;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    t = {};
    t.t_off_v = -0.1;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("ideal targets produce the ideal device with zero residual") {
    CalibrationTargets t;
    t.f_diag = 1.0;
    t.f_hv = 1.0;
    t.t_on = 1.0;
    t.t_off_h = 0.0;
    t.t_off_v = 0.0;
    const CalibrationResult r = shutter::calibrate_shutter(t, {}, 1000.0);
    CHECK(r.max_residual == 0.0);
    CHECK(r.params.tilt_phase == 0.0);
    CHECK(r.params.leakage_h == 0.0);
    CHECK(r.params.leakage_v == 0.0);
    CHECK(r.params.displacer_transmission == 1.0);
    CHECK(r.params.pockels_transmission == 1.0);
    CHECK(r.params.hwp_angle_offset == 0.0);
}

TEST_CASE("the fit reaches a realistic target table") {
    CalibrationTargets t;  // defaults hold the realistic table
    const CalibrationResult r =
        shutter::calibrate_shutter(t, imperfect_trigger(), 1000.0);
    CHECK(r.max_residual < 1e-6);
    CHECK(r.iterations >= 1);
    REQUIRE(r.achieved.size() == 4);
    CHECK(std::abs(r.achieved[0].f_on - 0.956) < 2e-6);
    CHECK(std::abs(r.achieved[1].f_on - 0.956) < 2e-6);
    CHECK(std::abs(r.achieved[2].f_on - 0.998) < 2e-6);
    CHECK(std::abs(r.achieved[3].f_on - 0.998) < 2e-6);
    for (const auto& rec : r.achieved) {
        CHECK(std::abs(rec.t_on - 0.991) < 2e-6);
    }
    CHECK(std::abs(r.achieved[2].t_off - 0.0050) < 2e-6);
    CHECK(std::abs(r.achieved[3].t_off - 0.0020) < 2e-6);
    // The fitted parameters stay inside their physical ranges.
    CHECK(r.params.leakage_h > 0.0);
    CHECK(r.params.leakage_h < 0.05);
    CHECK(r.params.leakage_v > 0.0);
    CHECK(r.params.leakage_v < 0.05);
    CHECK(r.params.displacer_transmission > 0.9);
    CHECK(r.params.displacer_transmission <= 1.0);
    CHECK(r.params.tilt_phase > 0.0);
}

TEST_CASE("a forward table round-trips through the fit") {
    // Forward-simulate a known device, feed its table back, and require the
    // fit to land on parameters that reproduce that same table.
    ShutterParams truth;
    truth.tilt_phase = 0.37;
    truth.leakage_h = 0.0011;
    truth.leakage_v = 0.0006;
    truth.displacer_transmission = 0.9975;
    truth.pockels_transmission = 0.9975;
    truth.hwp_angle_offset = 0.018;
    const TriggerConfig trig = imperfect_trigger();
    const Device dev = shutter::build_shutter(truth);
    const auto table = shutter::characterize(dev, trig, 1000.0);

    CalibrationTargets t;
    t.f_diag = table[0].f_on;
    t.f_hv = table[2].f_on;
    t.t_on = table[2].t_on;
    t.t_off_h = table[2].t_off;
    t.t_off_v = table[3].t_off;
    const CalibrationResult r = shutter::calibrate_shutter(t, trig, 1000.0);
    CHECK(r.max_residual < 1e-9);
    CHECK(r.params.tilt_phase == doctest::Approx(truth.tilt_phase).epsilon(1e-5));
    CHECK(r.params.leakage_h == doctest::Approx(truth.leakage_h).epsilon(1e-4));
    CHECK(r.params.leakage_v == doctest::Approx(truth.leakage_v).epsilon(1e-4));
    CHECK(r.params.hwp_angle_offset ==
          doctest::Approx(truth.hwp_angle_offset).epsilon(1e-6));
    // The transmission budget is degenerate between the elements; only the
    // product is observable.
    const double product = r.params.displacer_transmission *
                           r.params.displacer_transmission *
                           r.params.pockels_transmission;
    const double truth_product = truth.displacer_transmission *
                                 truth.displacer_transmission *
                                 truth.pockels_transmission;
    CHECK(product == doctest::Approx(truth_product).epsilon(1e-7));
}

TEST_CASE("unreachable extinction targets raise a calibration error") {
    CalibrationTargets t;
    t.t_off_h = 0.4;  // beyond what bounded leakage can produce
    CHECK_THROWS_AS(shutter::calibrate_shutter(t, imperfect_trigger(), 1000.0),
                    shutter::CalibrationError);
}

TEST_CASE("the loss-and-leakage fit holds the inter-arm phase fixed") {
    ShutterParams start;
    start.tilt_phase = 0.3;
    const ShutterParams fitted = shutter::calibrate_losses_and_leakage(
        0.991, 0.998, 0.0050, 0.0020, imperfect_trigger(), 1000.0, {}, start);
    CHECK(fitted.tilt_phase == 0.3);
    CHECK(fitted.leakage_h > 0.0);
    CHECK(fitted.leakage_v > 0.0);
    CHECK(fitted.displacer_transmission < 1.0);
    // The fitted device reproduces the non-interferometric cells.
    const auto table =
        shutter::characterize(shutter::build_shutter(fitted), imperfect_trigger(), 1000.0);
    CHECK(std::abs(table[2].f_on - 0.998) < 2e-6);
    CHECK(std::abs(table[2].t_on - 0.991) < 2e-6);
    CHECK(std::abs(table[2].t_off - 0.0050) < 2e-6);
    CHECK(std::abs(table[3].t_off - 0.0020) < 2e-6);
}
