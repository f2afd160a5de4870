#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "shutter/engine.hpp"

using shutter::CellState;
using shutter::Device;
using shutter::JonesVector;
using shutter::Protocol;
using shutter::ShutterParams;
using shutter::SourceConfig;
using shutter::TriggerConfig;

namespace {

CellState single_trigger_cell(const TriggerConfig& trig = {}) {
    return shutter::make_cell(trig, {0.0});
}

}  // namespace

TEST_CASE("pulse on the flat top passes, pulse long after blocks") {
    const Device dev = shutter::build_shutter();
    const CellState cell = single_trigger_cell();
    const JonesVector input = JonesVector::horizontal();

    const auto on = shutter::simulate_pulse(dev, cell, 5e-9, input);
    CHECK(on.retardance == std::numbers::pi);
    CHECK(on.transmitted == 1.0);
    CHECK(on.blocked == 0.0);
    CHECK(on.absorbed == 0.0);

    const auto off = shutter::simulate_pulse(dev, cell, 0.5e-3, input);
    CHECK(off.retardance == 0.0);
    CHECK(off.transmitted == 0.0);
    CHECK(off.blocked == 1.0);
}

TEST_CASE("inter-arm phase error leaves H and V fidelities untouched") {
    ShutterParams p;
    p.tilt_phase = 0.7;
    const Device dev = shutter::build_shutter(p);
    const auto records = shutter::characterize(dev, {}, 1000.0);
    REQUIRE(records.size() == 4);
    // Order is +, -, H, V.
    CHECK(records[2].f_on == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(records[3].f_on == doctest::Approx(1.0).epsilon(1e-12));
    // The diagonal basis sees cos^2(phase / 2).
    const double expected = std::cos(0.35) * std::cos(0.35);
    CHECK(records[0].f_on == doctest::Approx(expected).epsilon(1e-12));
    CHECK(records[1].f_on == doctest::Approx(expected).epsilon(1e-12));
    // Transmission is phase-blind for every input.
    for (const auto& r : records) {
        CHECK(r.t_on == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.t_off == 0.0);
    }
}

TEST_CASE("output waveplate axis error costs every basis the same fidelity") {
    ShutterParams p;
    p.hwp_angle_offset = 0.05;
    const Device dev = shutter::build_shutter(p);
    const auto records = shutter::characterize(dev, {}, 1000.0);
    const double c = std::cos(2.0 * p.hwp_angle_offset);
    const double hv = c * c;                                   // cos^2(2 offset)
    const double diag = 0.5 * (1.0 + std::cos(4.0 * p.hwp_angle_offset));
    CHECK(records[0].f_on == doctest::Approx(diag).epsilon(1e-12));
    CHECK(records[1].f_on == doctest::Approx(diag).epsilon(1e-12));
    CHECK(records[2].f_on == doctest::Approx(hv).epsilon(1e-12));
    CHECK(records[3].f_on == doctest::Approx(hv).epsilon(1e-12));
    for (const auto& r : records) {
        CHECK(r.t_on == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("leakage sets the blocked-state floor") {
    ShutterParams p;
    p.leakage_h = 0.01;
    p.leakage_v = 0.004;
    p.tilt_phase = 0.3;
    const Device dev = shutter::build_shutter(p);
    const auto records = shutter::characterize(dev, {}, 1000.0);
    const double arm = std::cos(0.15) * std::cos(0.15);
    const double off_h = 4.0 * 0.01 * 0.99 * arm;
    const double off_v = 4.0 * 0.004 * 0.996 * arm;
    CHECK(records[2].t_off == doctest::Approx(off_h).epsilon(1e-12));
    CHECK(records[3].t_off == doctest::Approx(off_v).epsilon(1e-12));
    // Diagonal inputs carry half of each linear component.
    CHECK(records[0].t_off ==
          doctest::Approx(0.5 * (off_h + off_v)).epsilon(1e-10));
    CHECK(records[1].t_off ==
          doctest::Approx(0.5 * (off_h + off_v)).epsilon(1e-10));
}

TEST_CASE("characterization is deterministic per protocol seed") {
    TriggerConfig trig;
    trig.ringing.amplitude = 0.5;
    trig.ringing.omega = 2.0 * std::numbers::pi * 400e3;
    trig.ringing.tau_damp = 1200e-9;
    trig.ringing.onset_delay = 20e-9;
    ShutterParams p;
    p.tilt_phase = 0.4;
    p.leakage_h = 0.001;
    const Device dev = shutter::build_shutter(p);

    Protocol proto;
    proto.seed = 5;
    const auto a = shutter::characterize(dev, trig, 1000.0, proto);
    const auto b = shutter::characterize(dev, trig, 1000.0, proto);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].f_on == b[i].f_on);
        CHECK(a[i].t_on == b[i].t_on);
        CHECK(a[i].t_off == b[i].t_off);
    }
}

TEST_CASE("characterize accepts a label subset and aliases") {
    const Device dev = shutter::build_shutter();
    const auto records = shutter::characterize(dev, {}, 1000.0, {"v", "plus"}, {});
    REQUIRE(records.size() == 2);
    CHECK(records[0].polarization == "+");
    CHECK(records[1].polarization == "V");
    CHECK_THROWS_AS(shutter::characterize(dev, {}, 1000.0, {}, {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(shutter::characterize(dev, {}, 0.0, {"H"}, {}),
                    std::invalid_argument);
}

TEST_CASE("pulse train covers the duration at the repetition rate") {
    const Device dev = shutter::build_shutter();
    const CellState cell = single_trigger_cell();
    SourceConfig source;
    source.rep_rate = 100e3;
    const auto train = shutter::simulate_train(dev, cell, source, 1e-4);
    // floor(1e-4 * 1e5) + 1 pulses at k / rep_rate.
    REQUIRE(train.times.size() == 11);
    REQUIRE(train.pulses.size() == 11);
    CHECK(train.times[0] == 0.0);
    CHECK(train.times[10] == doctest::Approx(1e-4).epsilon(1e-15));
    // The trigger fires at t = 0, so only the first pulse passes.
    CHECK(train.pulses[0].transmitted == 1.0);
    for (std::size_t k = 1; k < train.pulses.size(); ++k) {
        CHECK(train.pulses[k].transmitted < 1e-6);
    }
}

TEST_CASE("pulse train conserves intensity per pulse") {
    ShutterParams p;
    p.leakage_h = 0.002;
    p.leakage_v = 0.001;
    p.displacer_transmission = 0.997;
    p.pockels_transmission = 0.998;
    p.tilt_phase = 0.3;
    const Device dev = shutter::build_shutter(p);
    TriggerConfig trig;
    trig.recovery.residual_retardance = 0.05;
    trig.recovery.residual_phase = 0.15;
    const CellState cell = shutter::make_cell(trig, {0.0, 1e-3, 2e-3});
    SourceConfig source;
    const auto train = shutter::simulate_train(dev, cell, source, 3e-3);
    for (const auto& pulse : train.pulses) {
        const double total = pulse.transmitted + pulse.blocked + pulse.absorbed;
        CHECK(std::abs(total - 1.0) < 1e-12);
    }
}

TEST_CASE("time sweep grid is uniform and carries the cell retardance") {
    const Device dev = shutter::build_shutter();
    const auto sweep = shutter::sweep_time_after_trigger(dev, {}, 0.0, 1e-8, 3);
    CHECK(sweep.abscissa_name == "time_s");
    REQUIRE(sweep.abscissa.size() == 3);
    CHECK(sweep.abscissa[0] == 0.0);
    CHECK(sweep.abscissa[1] == 5e-9);
    CHECK(sweep.abscissa[2] == 1e-8);
    REQUIRE(sweep.columns.size() == 5);
    CHECK(sweep.columns[0].first == "t_plus");
    CHECK(sweep.columns[4].first == "retardance_rad");
    // All three samples sit on the flat top of the ideal device.
    for (std::size_t p = 0; p < 4; ++p) {
        for (double v : sweep.columns[p].second) {
            CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
    for (double r : sweep.columns[4].second) {
        CHECK(r == std::numbers::pi);
    }
    CHECK_THROWS_AS(shutter::sweep_time_after_trigger(dev, {}, 0.0, 1e-8, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(shutter::sweep_time_after_trigger(dev, {}, 1e-8, 1e-8, 3),
                    std::invalid_argument);
}

TEST_CASE("frequency sweep uses a log grid with pinned endpoints") {
    const Device dev = shutter::build_shutter();
    Protocol proto;
    proto.warmup = 2;
    proto.samples = 5;
    const auto sweep = shutter::sweep_trigger_frequency(dev, {}, 100.0, 10000.0, 5, proto);
    CHECK(sweep.abscissa_name == "trigger_freq_hz");
    REQUIRE(sweep.abscissa.size() == 5);
    CHECK(sweep.abscissa.front() == 100.0);
    CHECK(sweep.abscissa.back() == 10000.0);
    // Log-uniform: constant ratio between neighbors.
    const double ratio = sweep.abscissa[1] / sweep.abscissa[0];
    for (std::size_t i = 2; i < sweep.abscissa.size(); ++i) {
        CHECK(sweep.abscissa[i] / sweep.abscissa[i - 1] ==
              doctest::Approx(ratio).epsilon(1e-12));
    }
    REQUIRE(sweep.columns.size() == 12);
    CHECK(sweep.columns[0].first == "f_on_plus");
    CHECK(sweep.columns[11].first == "t_off_V");
    // The ideal device is frequency-flat.
    for (double v : sweep.columns[0].second) {
        CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("frequency sweep is reproducible for a fixed seed") {
    ShutterParams p;
    p.tilt_phase = 0.4;
    p.leakage_h = 0.0013;
    p.leakage_v = 0.0005;
    const Device dev = shutter::build_shutter(p);
    TriggerConfig trig;
    trig.recovery.residual_retardance = 0.05;
    trig.recovery.residual_phase = 0.15;
    Protocol proto;
    proto.warmup = 2;
    proto.samples = 10;
    proto.seed = 9;
    const auto a = shutter::sweep_trigger_frequency(dev, trig, 100.0, 10000.0, 7, proto);
    const auto b = shutter::sweep_trigger_frequency(dev, trig, 100.0, 10000.0, 7, proto);
    for (std::size_t c = 0; c < a.columns.size(); ++c) {
        for (std::size_t i = 0; i < a.columns[c].second.size(); ++i) {
            CHECK(a.columns[c].second[i] == b.columns[c].second[i]);
        }
    }
}

TEST_CASE("source and protocol validation") {
    SourceConfig s;
    s.rep_rate = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = {};
    s.polarization = {{2.0, 0.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    Protocol p;
    p.warmup = -1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.samples = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
