#include "shutter/bench.hpp"

#include <charconv>
#include <string>

namespace shutter::bench {

namespace {

const char* canonical_suffix(Dimension d) {
    switch (d) {
        case Dimension::None: return "";
        case Dimension::Length: return "mm";
        case Dimension::Time: return "ns";
        case Dimension::Voltage: return "V";
        case Dimension::Frequency: return "Hz";
        case Dimension::Angle: return "rad";
    }
    return "";
}

void append_number(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

void append_value(std::string& out, const Value& v) {
    switch (v.kind) {
        case Value::Kind::Number:
            append_number(out, v.number);
            out += canonical_suffix(v.dimension);
            break;
        case Value::Kind::List: {
            out += '[';
            bool first = true;
            for (double x : v.list) {
                if (!first) out += ", ";
                first = false;
                append_number(out, x);
            }
            out += ']';
            break;
        }
        case Value::Kind::Ident:
            out += v.ident;
            break;
    }
}

void append_assignments(std::string& out, const Entry& e, bool lead_space) {
    bool first = !lead_space;
    for (const Assignment& a : e.assignments) {
        if (!first) out += ' ';
        first = false;
        out += a.key;
        out += '=';
        append_value(out, a.value);
    }
}

}  // namespace

std::string serialize_bench(const BenchDocument& doc) {
    std::string out;
    bool first = true;
    for (const Section& s : doc.sections) {
        if (!first) out += '\n';
        first = false;
        out += s.name;
        out += " {\n";
        for (const Entry& e : s.entries) {
            out += "  ";
            if (!e.element.empty()) {
                out += e.element;
                append_assignments(out, e, /*lead_space=*/true);
            } else {
                append_assignments(out, e, /*lead_space=*/false);
            }
            out += '\n';
        }
        out += "}\n";
    }
    return out;
}

}  // namespace shutter::bench
