#include "shutter/bench.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "shutter/metrics.hpp"

namespace shutter::bench {

namespace {

const Value* section_value(const Section& s, std::string_view key) {
    for (const Entry& e : s.entries)
        for (const Assignment& a : e.assignments)
            if (e.element.empty() && a.key == key) return &a.value;
    return nullptr;
}

double section_num(const Section& s, std::string_view key, double fallback) {
    const Value* v = section_value(s, key);
    return v ? v->number : fallback;
}

const Value* entry_value(const Entry& e, std::string_view key) {
    for (const Assignment& a : e.assignments)
        if (a.key == key) return &a.value;
    return nullptr;
}

double entry_num(const Entry& e, std::string_view key, double fallback) {
    const Value* v = entry_value(e, key);
    return v ? v->number : fallback;
}

/// Canonical bench times are nanoseconds; the engine runs in seconds.
double to_seconds(double ns) { return ns / 1e9; }

Device build_device(const Section& dev, double& v_halfwave) {
    Device device;
    int pockels_count = 0;
    for (const Entry& e : dev.entries) {
        if (e.element == "displacer") {
            BeamDisplacer d;
            d.displacement = entry_num(e, "d", 4.0);
            d.chi_o = d.chi_e = entry_num(e, "chi", 0.0);
            d.tilt_phase = entry_num(e, "tilt", 0.0);
            d.transmission = entry_num(e, "transmission", 1.0);
            d.leakage_h = entry_num(e, "leak_h", 0.0);
            d.leakage_v = entry_num(e, "leak_v", 0.0);
            device.elements.push_back(d);
        } else if (e.element == "pockels") {
            ++pockels_count;
            v_halfwave = entry_num(e, "vhalf", 3200.0);
            PockelsCell pc;
            pc.transmission = entry_num(e, "transmission", 1.0);
            device.elements.push_back(pc);
        } else if (e.element == "hwp") {
            Waveplate w;
            w.retardance = entry_num(e, "retardance", std::numbers::pi);
            w.angle = entry_num(e, "angle", std::numbers::pi / 4.0);
            w.transmission = entry_num(e, "transmission", 1.0);
            device.elements.push_back(w);
        } else if (e.element == "pinhole") {
            Pinhole p;
            if (const Value* v = entry_value(e, "rails")) {
                p.open_rails.clear();
                for (double x : v->list)
                    p.open_rails.insert(static_cast<int>(std::lround(x)));
            }
            device.elements.push_back(p);
        } else if (e.element == "analyzer") {
            Analyzer a;
            a.angle = entry_num(e, "angle", 0.0);
            a.extinction = entry_num(e, "extinction", 0.0);
            a.transmission = entry_num(e, "transmission", 1.0);
            device.elements.push_back(a);
        }
    }
    if (pockels_count != 1)
        throw std::invalid_argument("device needs exactly one pockels cell");
    return device;
}

}  // namespace

BenchSetup build_setup(const BenchDocument& doc) {
    const Section* dev = doc.find("device");
    const Section* src = doc.find("source");
    const Section* trg = doc.find("trigger");
    if (!dev || !src || !trg)
        throw std::invalid_argument("bench document missing a required section");

    BenchSetup setup;
    double v_halfwave = 3200.0;
    setup.device = build_device(*dev, v_halfwave);

    setup.source.rep_rate = section_num(*src, "rep_rate", 250000.0);
    setup.source.wavelength = section_num(*src, "wavelength", 0.0008);
    setup.source.bandwidth = section_num(*src, "bandwidth", 1.5e-6);
    if (const Value* v = section_value(*src, "polarization"))
        setup.source.polarization_label = v->ident;
    setup.source.polarization = polarization_state(setup.source.polarization_label);
    setup.source.intensity = section_num(*src, "intensity", 1.0);

    TriggerConfig& t = setup.trigger;
    t.drive.v_peak = section_num(*trg, "vpeak", 3200.0);
    t.drive.t_flat = to_seconds(section_num(*trg, "flat", 10.0));
    t.drive.tau_decay = to_seconds(section_num(*trg, "tau", 500.0));
    t.drive.jitter_sigma = to_seconds(section_num(*trg, "jitter", 1.5));
    t.ringing.amplitude = section_num(*trg, "ring_amp", 0.0);
    t.ringing.omega = 2.0 * std::numbers::pi * section_num(*trg, "ring_freq", 0.0);
    t.ringing.tau_damp = to_seconds(section_num(*trg, "ring_tau", 1200.0));
    t.ringing.phase0 = section_num(*trg, "ring_phase", 0.0);
    t.ringing.onset_delay = to_seconds(section_num(*trg, "ring_delay", 20.0));
    t.recovery.tau_recovery = to_seconds(section_num(*trg, "recovery_tau", 50000.0));
    t.recovery.residual_retardance = section_num(*trg, "residual", 0.0);
    t.recovery.residual_phase = section_num(*trg, "residual_phase", 0.0);
    t.v_halfwave = v_halfwave;
    setup.trigger_freq = section_num(*trg, "freq", 1000.0);

    if (const Section* sw = doc.find("sweep")) {
        SweepSpec spec;
        const std::string& mode = section_value(*sw, "mode")->ident;
        if (mode == "time") {
            spec.mode = SweepSpec::Mode::Time;
            spec.from = to_seconds(section_num(*sw, "from", 0.0));
            spec.to = to_seconds(section_num(*sw, "to", 6000.0));
            spec.steps = static_cast<int>(section_num(*sw, "steps", 601.0));
        } else {
            spec.mode = SweepSpec::Mode::Frequency;
            spec.from = section_num(*sw, "from", 100.0);
            spec.to = section_num(*sw, "to", 10000.0);
            spec.steps = static_cast<int>(section_num(*sw, "steps", 17.0));
        }
        setup.sweep = spec;
    }

    if (const Section* tg = doc.find("targets")) {
        CalibrationTargets ct;
        ct.f_diag = section_num(*tg, "f_diag", ct.f_diag);
        ct.f_hv = section_num(*tg, "f_hv", ct.f_hv);
        ct.t_on = section_num(*tg, "t_on", ct.t_on);
        ct.t_off_h = section_num(*tg, "t_off_h", ct.t_off_h);
        ct.t_off_v = section_num(*tg, "t_off_v", ct.t_off_v);
        ct.validate();
        setup.targets = ct;
    }

    setup.source.validate();
    setup.trigger.validate();
    return setup;
}

bool has_canonical_layout(const BenchDocument& doc) {
    const Section* dev = doc.find("device");
    if (!dev || dev->entries.size() != 5) return false;
    static constexpr const char* kOrder[] = {"displacer", "pockels", "displacer", "pinhole",
                                             "hwp"};
    for (size_t i = 0; i < 5; ++i)
        if (dev->entries[i].element != kOrder[i]) return false;
    const Value* rails = entry_value(dev->entries[3], "rails");
    return rails == nullptr || rails->list == std::vector<double>{1.0};
}

BenchDocument apply_calibration(const BenchDocument& doc, const ShutterParams& params) {
    BenchDocument out = doc;
    Section* dev = nullptr;
    for (Section& s : out.sections)
        if (s.name == "device") dev = &s;
    if (!dev) throw std::invalid_argument("bench document has no device section");

    auto upsert = [](Entry& e, const char* key, Value v) {
        for (Assignment& a : e.assignments)
            if (a.key == key) {
                a.value = std::move(v);
                return;
            }
        e.assignments.push_back({key, std::move(v), 0, 0});
    };

    int pockels_at = -1;
    for (size_t i = 0; i < dev->entries.size(); ++i)
        if (dev->entries[i].element == "pockels") pockels_at = static_cast<int>(i);

    for (size_t i = 0; i < dev->entries.size(); ++i) {
        Entry& e = dev->entries[i];
        if (e.element == "displacer") {
            upsert(e, "transmission",
                   Value::make_number(params.displacer_transmission, Dimension::None));
            upsert(e, "leak_h", Value::make_number(params.leakage_h, Dimension::None));
            upsert(e, "leak_v", Value::make_number(params.leakage_v, Dimension::None));
            if (pockels_at >= 0 && static_cast<int>(i) > pockels_at)
                upsert(e, "tilt", Value::make_number(params.tilt_phase, Dimension::Angle));
        } else if (e.element == "pockels") {
            upsert(e, "transmission",
                   Value::make_number(params.pockels_transmission, Dimension::None));
        } else if (e.element == "hwp") {
            upsert(e, "angle",
                   Value::make_number(std::numbers::pi / 4.0 + params.hwp_angle_offset,
                                      Dimension::Angle));
        }
    }
    return out;
}

}  // namespace shutter::bench
