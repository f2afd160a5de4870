#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shutter/calibrate.hpp"
#include "shutter/elements.hpp"
#include "shutter/engine.hpp"

namespace shutter::bench {

/// Physical dimension of a parsed number; values are stored in the canonical
/// unit of their dimension (mm, ns, V, Hz, rad).
enum class Dimension { None, Length, Time, Voltage, Frequency, Angle };

const char* dimension_name(Dimension d);

struct Value {
    enum class Kind { Number, List, Ident };
    Kind kind = Kind::Number;
    double number = 0.0;
    Dimension dimension = Dimension::None;
    std::vector<double> list;
    std::string ident;

    static Value make_number(double v, Dimension d);
    static Value make_list(std::vector<double> v);
    static Value make_ident(std::string v);
};

struct Assignment {
    std::string key;
    Value value;
    int line = 0;
    int column = 0;
};

/// One row of a section: an element with its settings inside `device`, or a
/// single plain assignment elsewhere.
struct Entry {
    std::string element;
    std::vector<Assignment> assignments;
    int line = 0;
    int column = 0;
};

struct Section {
    std::string name;
    std::vector<Entry> entries;
    int line = 0;
    int column = 0;
};

struct BenchDocument {
    std::vector<Section> sections;

    const Section* find(std::string_view name) const;
};

/// Structural equality; source locations do not participate.
bool operator==(const Value& a, const Value& b);
bool operator==(const Assignment& a, const Assignment& b);
bool operator==(const Entry& a, const Entry& b);
bool operator==(const Section& a, const Section& b);
bool operator==(const BenchDocument& a, const BenchDocument& b);
inline bool operator!=(const BenchDocument& a, const BenchDocument& b) { return !(a == b); }

struct Diagnostic {
    int line = 0;
    int column = 0;
    std::string message;
};

class ParseError : public std::runtime_error {
  public:
    explicit ParseError(Diagnostic diagnostic);
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

  private:
    static std::string format(const Diagnostic& d);
    std::vector<Diagnostic> diagnostics_;
};

/// Parses and validates a bench description. Throws ParseError with a
/// 1-based line/column diagnostic on the first problem found.
BenchDocument parse_bench(std::string_view text);

/// Canonical multi-line rendering; parse(serialize(doc)) == doc.
std::string serialize_bench(const BenchDocument& doc);

struct SweepSpec {
    enum class Mode { Time, Frequency };
    Mode mode = Mode::Time;
    double from = 0.0;  ///< seconds or hertz, by mode
    double to = 0.0;
    int steps = 2;
};

/// A validated document lowered to simulation inputs (SI units throughout).
struct BenchSetup {
    Device device;
    SourceConfig source;
    TriggerConfig trigger;
    double trigger_freq = 1000.0;
    std::optional<SweepSpec> sweep;
    std::optional<CalibrationTargets> targets;
};

BenchSetup build_setup(const BenchDocument& doc);

/// True when the device is the shutter chain the fit assumes: displacer,
/// pockels, displacer, pinhole on rail 1, output hwp.
bool has_canonical_layout(const BenchDocument& doc);

/// Writes fitted parameters back into a copy of the document: leakage and
/// transmission onto the displacers and cell, the recombining displacer's
/// tilt, and the output waveplate axis. Requires the canonical layout
/// displacer / pockels / displacer / pinhole / hwp.
BenchDocument apply_calibration(const BenchDocument& doc, const ShutterParams& params);

}  // namespace shutter::bench
