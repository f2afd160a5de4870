#include "shutter/bench.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "shutter/metrics.hpp"

namespace shutter::bench {

const char* dimension_name(Dimension d) {
    switch (d) {
        case Dimension::None: return "plain number";
        case Dimension::Length: return "length";
        case Dimension::Time: return "time";
        case Dimension::Voltage: return "voltage";
        case Dimension::Frequency: return "frequency";
        case Dimension::Angle: return "angle";
    }
    return "?";
}

Value Value::make_number(double v, Dimension d) {
    Value out;
    out.kind = Kind::Number;
    out.number = v;
    out.dimension = d;
    return out;
}

Value Value::make_list(std::vector<double> v) {
    Value out;
    out.kind = Kind::List;
    out.list = std::move(v);
    return out;
}

Value Value::make_ident(std::string v) {
    Value out;
    out.kind = Kind::Ident;
    out.ident = std::move(v);
    return out;
}

bool operator==(const Value& a, const Value& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Value::Kind::Number: return a.number == b.number && a.dimension == b.dimension;
        case Value::Kind::List: return a.list == b.list;
        case Value::Kind::Ident: return a.ident == b.ident;
    }
    return false;
}

bool operator==(const Assignment& a, const Assignment& b) {
    return a.key == b.key && a.value == b.value;
}

bool operator==(const Entry& a, const Entry& b) {
    return a.element == b.element && a.assignments == b.assignments;
}

bool operator==(const Section& a, const Section& b) {
    return a.name == b.name && a.entries == b.entries;
}

bool operator==(const BenchDocument& a, const BenchDocument& b) {
    return a.sections == b.sections;
}

const Section* BenchDocument::find(std::string_view name) const {
    for (const Section& s : sections)
        if (s.name == name) return &s;
    return nullptr;
}

std::string ParseError::format(const Diagnostic& d) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%d:%d: ", d.line, d.column);
    return std::string(buf) + d.message;
}

ParseError::ParseError(Diagnostic diagnostic)
    : std::runtime_error(format(diagnostic)), diagnostics_{std::move(diagnostic)} {}

namespace {

[[noreturn]] void fail(int line, int column, std::string message) {
    throw ParseError({line, column, std::move(message)});
}

// ---------------------------------------------------------------------------
// Lexing

enum class Tok { Ident, Number, Equals, LBrace, RBrace, LBracket, RBracket, Comma, Newline, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;  ///< ident spelling, or the unit suffix of a number
    double number = 0.0;
    int line = 1;
    int column = 1;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct Lexer {
    std::string_view text;
    size_t pos = 0;
    int line = 1;
    int col = 1;

    /// Micro prefix in UTF-8: U+00B5 (micro sign) or U+03BC (Greek mu).
    bool micro_at(size_t p) const {
        if (p + 1 >= text.size()) return false;
        const auto a = static_cast<unsigned char>(text[p]);
        const auto b = static_cast<unsigned char>(text[p + 1]);
        return (a == 0xC2 && b == 0xB5) || (a == 0xCE && b == 0xBC);
    }

    void advance(size_t n) {
        pos += n;
        col += static_cast<int>(n);
    }

    Token next() {
        for (;;) {
            while (pos < text.size() &&
                   (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r'))
                advance(1);
            if (pos < text.size() && text[pos] == '#') {
                while (pos < text.size() && text[pos] != '\n') advance(1);
                continue;
            }
            break;
        }
        Token t;
        t.line = line;
        t.column = col;
        if (pos >= text.size()) return t;
        const char c = text[pos];
        if (c == '\n') {
            ++pos;
            ++line;
            col = 1;
            t.kind = Tok::Newline;
            return t;
        }
        switch (c) {
            case '=': advance(1); t.kind = Tok::Equals; return t;
            case '{': advance(1); t.kind = Tok::LBrace; return t;
            case '}': advance(1); t.kind = Tok::RBrace; return t;
            case '[': advance(1); t.kind = Tok::LBracket; return t;
            case ']': advance(1); t.kind = Tok::RBracket; return t;
            case ',': advance(1); t.kind = Tok::Comma; return t;
            case ';': advance(1); t.kind = Tok::Newline; return t;
        }
        if (c == '+' || c == '-') {
            const bool numeric =
                pos + 1 < text.size() &&
                (std::isdigit(static_cast<unsigned char>(text[pos + 1])) || text[pos + 1] == '.');
            if (!numeric) {
                advance(1);
                t.kind = Tok::Ident;
                t.text.assign(1, c);
                return t;
            }
            return lex_number(t);
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(t);
        if (ident_start(c)) {
            const size_t start = pos;
            while (pos < text.size() && ident_char(text[pos])) advance(1);
            t.kind = Tok::Ident;
            t.text = std::string(text.substr(start, pos - start));
            return t;
        }
        if (static_cast<unsigned char>(c) < 0x20)
            fail(line, col, "unexpected control character");
        fail(line, col, std::string("unexpected character '") + c + "'");
    }

    Token lex_number(Token t) {
        if (text[pos] == '+') advance(1);  // from_chars rejects a leading '+'
        const char* begin = text.data() + pos;
        const char* end = text.data() + text.size();
        double value = 0.0;
        const auto res = std::from_chars(begin, end, value);
        if (res.ec == std::errc::result_out_of_range)
            fail(t.line, t.column, "number out of range");
        if (res.ec != std::errc() || res.ptr == begin)
            fail(t.line, t.column, "malformed number");
        advance(static_cast<size_t>(res.ptr - begin));
        const size_t unit_start = pos;
        while (pos < text.size()) {
            if (std::isalpha(static_cast<unsigned char>(text[pos]))) {
                advance(1);
                continue;
            }
            if (micro_at(pos)) {
                advance(2);
                continue;
            }
            break;
        }
        t.kind = Tok::Number;
        t.number = value;
        t.text = std::string(text.substr(unit_start, pos - unit_start));
        return t;
    }
};

// ---------------------------------------------------------------------------
// Units

struct UnitDef {
    const char* suffix;
    Dimension dim;
    double mul;
    double div;
};

constexpr UnitDef kUnits[] = {
    {"mm", Dimension::Length, 1, 1},
    {"cm", Dimension::Length, 10, 1},
    {"m", Dimension::Length, 1000, 1},
    {"um", Dimension::Length, 1, 1000},
    {"\xC2\xB5m", Dimension::Length, 1, 1000},
    {"\xCE\xBCm", Dimension::Length, 1, 1000},
    {"nm", Dimension::Length, 1, 1e6},
    {"ns", Dimension::Time, 1, 1},
    {"ps", Dimension::Time, 1, 1000},
    {"us", Dimension::Time, 1000, 1},
    {"\xC2\xB5s", Dimension::Time, 1000, 1},
    {"\xCE\xBCs", Dimension::Time, 1000, 1},
    {"ms", Dimension::Time, 1e6, 1},
    {"s", Dimension::Time, 1e9, 1},
    {"V", Dimension::Voltage, 1, 1},
    {"kV", Dimension::Voltage, 1000, 1},
    {"mV", Dimension::Voltage, 1, 1000},
    {"Hz", Dimension::Frequency, 1, 1},
    {"kHz", Dimension::Frequency, 1e3, 1},
    {"MHz", Dimension::Frequency, 1e6, 1},
    {"GHz", Dimension::Frequency, 1e9, 1},
    {"rad", Dimension::Angle, 1, 1},
    {"mrad", Dimension::Angle, 1, 1000},
};

Value number_value(const Token& t) {
    if (t.text.empty()) return Value::make_number(t.number, Dimension::None);
    if (t.text == "deg")
        return Value::make_number(t.number / 180.0 * std::numbers::pi, Dimension::Angle);
    for (const UnitDef& u : kUnits) {
        if (t.text != u.suffix) continue;
        const double v = u.div != 1 ? t.number / u.div : t.number * u.mul;
        return Value::make_number(v, u.dim);
    }
    fail(t.line, t.column, "unknown unit '" + t.text + "'");
}

// ---------------------------------------------------------------------------
// Grammar

struct Parser {
    Lexer lex;
    Token cur;
    Token ahead;
    bool has_ahead = false;

    explicit Parser(std::string_view text) : lex{text} { cur = lex.next(); }

    const Token& peek() {
        if (!has_ahead) {
            ahead = lex.next();
            has_ahead = true;
        }
        return ahead;
    }

    void bump() {
        if (has_ahead) {
            cur = ahead;
            has_ahead = false;
        } else {
            cur = lex.next();
        }
    }

    void skip_newlines() {
        while (cur.kind == Tok::Newline) bump();
    }

    BenchDocument parse() {
        BenchDocument doc;
        skip_newlines();
        while (cur.kind != Tok::End) {
            doc.sections.push_back(parse_section());
            skip_newlines();
        }
        return doc;
    }

    Section parse_section() {
        if (cur.kind != Tok::Ident) fail(cur.line, cur.column, "expected section name");
        Section s;
        s.name = cur.text;
        s.line = cur.line;
        s.column = cur.column;
        bump();
        skip_newlines();
        if (cur.kind != Tok::LBrace)
            fail(cur.line, cur.column, "expected '{' after section name '" + s.name + "'");
        bump();
        for (;;) {
            skip_newlines();
            if (cur.kind == Tok::RBrace) {
                bump();
                break;
            }
            if (cur.kind == Tok::End)
                fail(cur.line, cur.column, "missing '}' to close section '" + s.name + "'");
            parse_row(s);
        }
        return s;
    }

    /// A row is either a run of plain assignments or an element followed by
    /// its settings; rows end at a newline, a ';', or the closing brace.
    void parse_row(Section& s) {
        if (cur.kind != Tok::Ident) fail(cur.line, cur.column, "expected a name");
        if (peek().kind == Tok::Equals) {
            while (cur.kind == Tok::Ident && peek().kind == Tok::Equals) {
                Entry e;
                e.line = cur.line;
                e.column = cur.column;
                e.assignments.push_back(parse_assignment());
                s.entries.push_back(std::move(e));
            }
            if (cur.kind != Tok::Newline && cur.kind != Tok::RBrace && cur.kind != Tok::End)
                fail(cur.line, cur.column, "expected end of row");
            return;
        }
        Entry e;
        e.element = cur.text;
        e.line = cur.line;
        e.column = cur.column;
        bump();
        while (cur.kind == Tok::Ident && peek().kind == Tok::Equals)
            e.assignments.push_back(parse_assignment());
        if (cur.kind != Tok::Newline && cur.kind != Tok::RBrace && cur.kind != Tok::End &&
            cur.kind != Tok::Ident)
            fail(cur.line, cur.column, "expected end of row");
        s.entries.push_back(std::move(e));
    }

    Assignment parse_assignment() {
        Assignment a;
        a.key = cur.text;
        a.line = cur.line;
        a.column = cur.column;
        bump();  // key
        bump();  // '='
        a.value = parse_value();
        return a;
    }

    Value parse_value() {
        if (cur.kind == Tok::Number) {
            Value v = number_value(cur);
            bump();
            return v;
        }
        if (cur.kind == Tok::Ident) {
            Value v = Value::make_ident(cur.text);
            bump();
            return v;
        }
        if (cur.kind == Tok::LBracket) {
            bump();
            std::vector<double> xs;
            if (cur.kind != Tok::RBracket) {
                for (;;) {
                    if (cur.kind != Tok::Number)
                        fail(cur.line, cur.column, "expected a number in list");
                    if (!cur.text.empty())
                        fail(cur.line, cur.column, "list elements take no units");
                    xs.push_back(cur.number);
                    bump();
                    if (cur.kind == Tok::Comma) {
                        bump();
                        continue;
                    }
                    break;
                }
            }
            if (cur.kind != Tok::RBracket) fail(cur.line, cur.column, "expected ']'");
            bump();
            return Value::make_list(std::move(xs));
        }
        fail(cur.line, cur.column, "expected a value after '='");
    }
};

// ---------------------------------------------------------------------------
// Schema

struct KeySchema {
    const char* key;
    Value::Kind kind;
    Dimension dim;
    double lo;
    double hi;
    bool lo_open;
    bool hi_open;
    bool integral;
    /// Units and range depend on sibling keys; the section validator owns them.
    bool deferred = false;
};

constexpr double kBig = 1e16;
constexpr double kTau = 2.0 * std::numbers::pi;

constexpr KeySchema kDisplacerKeys[] = {
    {"d", Value::Kind::Number, Dimension::Length, 0, 1000, true, false, false},
    {"chi", Value::Kind::Number, Dimension::Angle, -kBig, kBig, false, false, false},
    {"tilt", Value::Kind::Number, Dimension::Angle, -kBig, kBig, false, false, false},
    {"transmission", Value::Kind::Number, Dimension::None, 0, 1, true, false, false},
    {"leak_h", Value::Kind::Number, Dimension::None, 0, 0.05, false, false, false},
    {"leak_v", Value::Kind::Number, Dimension::None, 0, 0.05, false, false, false},
};

constexpr KeySchema kPockelsKeys[] = {
    {"vhalf", Value::Kind::Number, Dimension::Voltage, 0, 1e6, true, false, false},
    {"transmission", Value::Kind::Number, Dimension::None, 0, 1, true, false, false},
};

constexpr KeySchema kHwpKeys[] = {
    {"angle", Value::Kind::Number, Dimension::Angle, -kBig, kBig, false, false, false},
    {"retardance", Value::Kind::Number, Dimension::Angle, 0, kTau, false, false, false},
    {"transmission", Value::Kind::Number, Dimension::None, 0, 1, true, false, false},
};

constexpr KeySchema kPinholeKeys[] = {
    {"rails", Value::Kind::List, Dimension::None, 0, 0, false, false, false},
};

constexpr KeySchema kAnalyzerKeys[] = {
    {"angle", Value::Kind::Number, Dimension::Angle, -kBig, kBig, false, false, false},
    {"extinction", Value::Kind::Number, Dimension::None, 0, 1, false, false, false},
    {"transmission", Value::Kind::Number, Dimension::None, 0, 1, true, false, false},
};

constexpr KeySchema kSourceKeys[] = {
    {"rep_rate", Value::Kind::Number, Dimension::Frequency, 0, kBig, true, false, false},
    {"wavelength", Value::Kind::Number, Dimension::Length, 0, 1000, true, false, false},
    {"bandwidth", Value::Kind::Number, Dimension::Length, 0, 1000, false, false, false},
    {"polarization", Value::Kind::Ident, Dimension::None, 0, 0, false, false, false},
    {"intensity", Value::Kind::Number, Dimension::None, 0, 1e6, true, false, false},
};

constexpr KeySchema kTriggerKeys[] = {
    {"freq", Value::Kind::Number, Dimension::Frequency, 0, kBig, true, false, false},
    {"vpeak", Value::Kind::Number, Dimension::Voltage, 0, 1e6, false, false, false},
    {"flat", Value::Kind::Number, Dimension::Time, 0, 1e9, false, false, false},
    {"tau", Value::Kind::Number, Dimension::Time, 0, 1e9, true, false, false},
    {"jitter", Value::Kind::Number, Dimension::Time, 0, 1e6, false, false, false},
    {"ring_amp", Value::Kind::Number, Dimension::Angle, 0, kTau, false, false, false},
    {"ring_freq", Value::Kind::Number, Dimension::Frequency, 0, kBig, false, false, false},
    {"ring_tau", Value::Kind::Number, Dimension::Time, 0, 1e9, true, false, false},
    {"ring_phase", Value::Kind::Number, Dimension::Angle, -kBig, kBig, false, false, false},
    {"ring_delay", Value::Kind::Number, Dimension::Time, 0, 1e9, false, false, false},
    {"recovery_tau", Value::Kind::Number, Dimension::Time, 0, 1e12, true, false, false},
    {"residual", Value::Kind::Number, Dimension::Angle, 0, kTau, false, false, false},
    {"residual_phase", Value::Kind::Number, Dimension::Angle, 0, kTau, false, false, false},
};

constexpr KeySchema kSweepKeys[] = {
    {"mode", Value::Kind::Ident, Dimension::None, 0, 0, false, false, false},
    {"from", Value::Kind::Number, Dimension::None, 0, 0, false, false, false, true},
    {"to", Value::Kind::Number, Dimension::None, 0, 0, false, false, false, true},
    {"steps", Value::Kind::Number, Dimension::None, 2, 1e6, false, false, true},
};

constexpr KeySchema kTargetsKeys[] = {
    {"f_diag", Value::Kind::Number, Dimension::None, 0.5, 1, true, false, false},
    {"f_hv", Value::Kind::Number, Dimension::None, 0, 1, true, false, false},
    {"t_on", Value::Kind::Number, Dimension::None, 0, 1, true, false, false},
    {"t_off_h", Value::Kind::Number, Dimension::None, 0, 1, false, true, false},
    {"t_off_v", Value::Kind::Number, Dimension::None, 0, 1, false, true, false},
};

struct ElementSchema {
    const char* name;
    const KeySchema* keys;
    size_t count;
};

constexpr ElementSchema kElements[] = {
    {"displacer", kDisplacerKeys, std::size(kDisplacerKeys)},
    {"pockels", kPockelsKeys, std::size(kPockelsKeys)},
    {"hwp", kHwpKeys, std::size(kHwpKeys)},
    {"pinhole", kPinholeKeys, std::size(kPinholeKeys)},
    {"analyzer", kAnalyzerKeys, std::size(kAnalyzerKeys)},
};

const KeySchema* find_key(const KeySchema* keys, size_t count, const std::string& name) {
    for (size_t i = 0; i < count; ++i)
        if (name == keys[i].key) return &keys[i];
    return nullptr;
}

void check_range(const Assignment& a, const KeySchema& ks) {
    const double v = a.value.number;
    const bool below = ks.lo_open ? v <= ks.lo : v < ks.lo;
    const bool above = ks.hi_open ? v >= ks.hi : v > ks.hi;
    if (below || above) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "value %g for '%s' out of range %c%g, %g%c", v,
                      a.key.c_str(), ks.lo_open ? '(' : '[', ks.lo, ks.hi,
                      ks.hi_open ? ')' : ']');
        fail(a.line, a.column, buf);
    }
    if (ks.integral && std::nearbyint(v) != v)
        fail(a.line, a.column, "'" + a.key + "' must be an integer");
}

void check_value(const Assignment& a, const KeySchema& ks) {
    const Value& v = a.value;
    if (v.kind != ks.kind) {
        const char* want = ks.kind == Value::Kind::Number ? "a number"
                           : ks.kind == Value::Kind::List ? "a list"
                                                          : "a name";
        fail(a.line, a.column, "'" + a.key + "' expects " + want);
    }
    if (ks.kind != Value::Kind::Number) return;
    if (ks.deferred) return;
    if (ks.dim == Dimension::None && v.dimension != Dimension::None)
        fail(a.line, a.column, "'" + a.key + "' takes a plain number");
    if (ks.dim != Dimension::None && v.dimension == Dimension::None)
        fail(a.line, a.column,
             "missing unit for '" + a.key + "' (expected " + dimension_name(ks.dim) + ")");
    if (ks.dim != Dimension::None && v.dimension != ks.dim)
        fail(a.line, a.column, "wrong units for '" + a.key + "': expected " +
                                   dimension_name(ks.dim) + ", got " +
                                   dimension_name(v.dimension));
    check_range(a, ks);
}

void check_no_duplicate_keys(const std::vector<const Assignment*>& seen, const Assignment& a) {
    for (const Assignment* other : seen)
        if (other->key == a.key) {
            char buf[32];
            std::snprintf(buf, sizeof buf, " (first on line %d)", other->line);
            fail(a.line, a.column, "duplicate key '" + a.key + "'" + buf);
        }
}

void validate_device(const Section& s) {
    for (const Entry& e : s.entries) {
        if (e.element.empty())
            fail(e.line, e.column,
                 "device rows must start with an element name (displacer, pockels, hwp, "
                 "pinhole, analyzer)");
        const ElementSchema* schema = nullptr;
        for (const ElementSchema& es : kElements)
            if (e.element == es.name) schema = &es;
        if (!schema) fail(e.line, e.column, "unknown element '" + e.element + "'");
        std::vector<const Assignment*> seen;
        for (const Assignment& a : e.assignments) {
            const KeySchema* ks = find_key(schema->keys, schema->count, a.key);
            if (!ks)
                fail(a.line, a.column, "unknown key '" + a.key + "' for " + e.element);
            check_no_duplicate_keys(seen, a);
            seen.push_back(&a);
            check_value(a, *ks);
        }
        if (e.element == "pinhole") {
            for (const Assignment& a : e.assignments) {
                if (a.key != "rails") continue;
                if (a.value.list.empty())
                    fail(a.line, a.column, "rails list must not be empty");
                std::vector<int> got;
                for (double x : a.value.list) {
                    if (std::nearbyint(x) != x || x < 0 || x > 31)
                        fail(a.line, a.column, "rail indices must be integers in [0, 31]");
                    const int r = static_cast<int>(x);
                    for (int prev : got)
                        if (prev == r) fail(a.line, a.column, "duplicate rail index");
                    got.push_back(r);
                }
            }
        }
    }
}

/// Flat sections reject element rows and duplicate keys across the section.
void validate_flat(Section& s, const KeySchema* keys, size_t count) {
    std::vector<const Assignment*> seen;
    for (Entry& e : s.entries) {
        if (!e.element.empty())
            fail(e.line, e.column,
                 "'" + e.element + "' looks like an element; those belong in the device "
                 "section");
        for (Assignment& a : e.assignments) {
            const KeySchema* ks = find_key(keys, count, a.key);
            if (!ks)
                fail(a.line, a.column, "unknown key '" + a.key + "' in " + s.name + " section");
            check_no_duplicate_keys(seen, a);
            seen.push_back(&a);
            check_value(a, *ks);
        }
    }
}

const Assignment* find_assignment(const Section& s, std::string_view key) {
    for (const Entry& e : s.entries)
        for (const Assignment& a : e.assignments)
            if (e.element.empty() && a.key == key) return &a;
    return nullptr;
}

Assignment* find_assignment(Section& s, std::string_view key) {
    return const_cast<Assignment*>(find_assignment(std::as_const(s), key));
}

void validate_source(Section& s) {
    validate_flat(s, kSourceKeys, std::size(kSourceKeys));
    if (Assignment* a = find_assignment(s, "polarization")) {
        try {
            a->value.ident = canonical_polarization(a->value.ident);
        } catch (const std::invalid_argument&) {
            fail(a->line, a->column, "unknown polarization '" + a->value.ident + "'");
        }
    }
}

void validate_sweep(Section& s) {
    validate_flat(s, kSweepKeys, std::size(kSweepKeys));
    const Assignment* mode = find_assignment(s, "mode");
    if (!mode) fail(s.line, s.column, "sweep section requires 'mode'");
    const std::string& m = mode->value.ident;
    if (m != "time" && m != "frequency")
        fail(mode->line, mode->column,
             "sweep mode must be 'time' or 'frequency', got '" + m + "'");
    const Dimension want = m == "time" ? Dimension::Time : Dimension::Frequency;
    const Assignment* from = find_assignment(s, "from");
    const Assignment* to = find_assignment(s, "to");
    for (const Assignment* a : {from, to}) {
        if (!a) continue;
        if (a->value.dimension != want)
            fail(a->line, a->column, "wrong units for '" + a->key + "': expected " +
                                         dimension_name(want) + ", got " +
                                         dimension_name(a->value.dimension));
        const bool positive_only = want == Dimension::Frequency;
        if (a->value.number < 0 || (positive_only && a->value.number == 0))
            fail(a->line, a->column, "'" + a->key + "' must be positive");
    }
    if (from && to && !(from->value.number < to->value.number))
        fail(to->line, to->column, "sweep range is empty: 'to' must exceed 'from'");
}

void validate_targets(const Section& s) {
    for (const KeySchema& ks : kTargetsKeys)
        if (!find_assignment(s, ks.key))
            fail(s.line, s.column, std::string("targets section missing '") + ks.key + "'");
}

void validate_document(BenchDocument& doc) {
    static constexpr const char* kSections[] = {"device", "source", "trigger", "sweep",
                                                "targets"};
    for (Section& s : doc.sections) {
        bool known = false;
        for (const char* name : kSections) known = known || s.name == name;
        if (!known) fail(s.line, s.column, "unknown section '" + s.name + "'");
    }
    for (size_t i = 0; i < doc.sections.size(); ++i)
        for (size_t j = 0; j < i; ++j)
            if (doc.sections[i].name == doc.sections[j].name) {
                char buf[32];
                std::snprintf(buf, sizeof buf, " (first on line %d)", doc.sections[j].line);
                fail(doc.sections[i].line, doc.sections[i].column,
                     "duplicate section '" + doc.sections[i].name + "'" + buf);
            }
    for (const char* required : {"device", "source", "trigger"})
        if (!doc.find(required))
            fail(1, 1, std::string("missing required section '") + required + "'");
    for (Section& s : doc.sections) {
        if (s.name == "device")
            validate_device(s);
        else if (s.name == "source")
            validate_source(s);
        else if (s.name == "trigger")
            validate_flat(s, kTriggerKeys, std::size(kTriggerKeys));
        else if (s.name == "sweep")
            validate_sweep(s);
        else if (s.name == "targets") {
            validate_flat(s, kTargetsKeys, std::size(kTargetsKeys));
            validate_targets(s);
        }
    }
}

}  // namespace

BenchDocument parse_bench(std::string_view text) {
    Parser parser(text);
    BenchDocument doc = parser.parse();
    validate_document(doc);
    return doc;
}

}  // namespace shutter::bench
