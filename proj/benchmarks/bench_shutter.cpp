#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "shutter/bench.hpp"
#include "shutter/drive.hpp"
#include "shutter/elements.hpp"
#include "shutter/engine.hpp"
#include "shutter/metrics.hpp"

namespace {

/// Shutter with realistic losses, leakage, and alignment trims.
shutter::Device lossy_device() {
    shutter::ShutterParams params;
    params.tilt_phase = 0.41;
    params.leakage_h = 0.0013;
    params.leakage_v = 0.0005;
    params.displacer_transmission = 0.997;
    params.pockels_transmission = 0.997;
    params.hwp_angle_offset = 0.018;
    return shutter::build_shutter(params);
}

shutter::TriggerConfig imperfect_trigger() {
    shutter::TriggerConfig trig;
    trig.ringing.amplitude = 0.5;
    trig.ringing.omega = 2.0 * std::numbers::pi * 400e3;
    trig.ringing.tau_damp = 1.2e-6;
    trig.ringing.onset_delay = 2e-8;
    trig.recovery.residual_retardance = 0.05;
    trig.recovery.residual_phase = 0.15;
    return trig;
}

/// Cell that has fired `count` times at 1 kHz, jitter applied.
shutter::CellState fired_cell(int count) {
    std::vector<double> schedule;
    for (int k = 0; k < count; ++k) schedule.push_back(1e-3 * k);
    return shutter::make_cell(imperfect_trigger(),
                              shutter::sample_trigger_times(schedule, 1.5e-9, 1));
}

constexpr char kBenchText[] =
    "device { displacer d=4mm chi=0rad transmission=0.997 leak_h=0.0013 leak_v=0.0005 ; "
    "pockels vhalf=3200V transmission=0.997 ; displacer d=4mm tilt=0.41rad ; "
    "pinhole rails=[1] ; hwp angle=46deg }\n"
    "source { rep_rate=250kHz wavelength=800nm polarization=+ }\n"
    "trigger { freq=1kHz vpeak=3200V flat=10ns tau=500ns jitter=1.5ns "
    "ring_amp=0.5rad ring_freq=400kHz ring_tau=1200ns ring_delay=20ns "
    "recovery_tau=50000ns residual=0.05rad residual_phase=0.15rad }\n"
    "sweep { mode=time from=0ns to=6000ns steps=601 }\n"
    "targets { f_diag=0.956 f_hv=0.998 t_on=0.991 t_off_h=0.005 t_off_v=0.002 }\n";

void BM_propagate(benchmark::State& state) {
    const shutter::Device device = lossy_device();
    const shutter::JonesVector input = shutter::polarization_state("+");
    shutter::PropagationOptions opt;
    opt.pockels_retardance = std::numbers::pi;
    for (auto _ : state) {
        shutter::Propagation out = shutter::propagate(device, input, opt);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_propagate);

void BM_cell_retardance(benchmark::State& state) {
    const shutter::CellState cell = fired_cell(static_cast<int>(state.range(0)));
    const double t = 1e-3 * static_cast<double>(state.range(0) - 1) + 3e-4;
    for (auto _ : state)
        benchmark::DoNotOptimize(shutter::effective_retardance(cell, t));
}
BENCHMARK(BM_cell_retardance)->Arg(10)->Arg(100);

void BM_single_pulse(benchmark::State& state) {
    const shutter::Device device = lossy_device();
    const shutter::CellState cell = fired_cell(100);
    const shutter::JonesVector input = shutter::polarization_state("+");
    const double t = 99e-3 + 5e-9;
    for (auto _ : state) {
        shutter::PulseResult out = shutter::simulate_pulse(device, cell, t, input);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_single_pulse);

void BM_characterize(benchmark::State& state) {
    const shutter::Device device = lossy_device();
    const shutter::TriggerConfig trig = imperfect_trigger();
    shutter::Protocol protocol;
    protocol.warmup = 5;
    protocol.samples = 20;
    for (auto _ : state) {
        auto records = shutter::characterize(device, trig, 1000.0, protocol);
        benchmark::DoNotOptimize(records);
    }
}
BENCHMARK(BM_characterize);

void BM_parse_bench(benchmark::State& state) {
    for (auto _ : state) {
        shutter::bench::BenchDocument doc = shutter::bench::parse_bench(kBenchText);
        benchmark::DoNotOptimize(doc);
    }
}
BENCHMARK(BM_parse_bench);

void BM_serialize_bench(benchmark::State& state) {
    const shutter::bench::BenchDocument doc = shutter::bench::parse_bench(kBenchText);
    for (auto _ : state) {
        std::string text = shutter::bench::serialize_bench(doc);
        benchmark::DoNotOptimize(text);
    }
}
BENCHMARK(BM_serialize_bench);

}  // namespace

BENCHMARK_MAIN();
