#include "stsperf/xml_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <initializer_list>
#include <string>
#include <vector>

#include "stsperf/error.hpp"
#include "stsperf/numfmt.hpp"

namespace stsperf {

namespace {

struct XmlAttr {
    std::string name;
    std::string value;
    int line = 0, col = 0;
};

struct XmlElement {
    std::string name;
    int line = 0, col = 0;
    std::vector<XmlAttr> attrs;
    std::vector<XmlElement> children;
};

// Minimal strict XML reader for the model schema: elements, attributes,
// comments and an optional declaration. Content text must be whitespace;
// DOCTYPE, CDATA and processing instructions beyond <?xml?> are rejected.
class XmlReader {
public:
    explicit XmlReader(const std::string& text) : text_(text) {
        if (text_.size() >= 3 && text_.compare(0, 3, "\xEF\xBB\xBF") == 0) pos_ = 3; // UTF-8 BOM
    }

    XmlElement parse_document() {
        skip_misc(/*allow_declaration=*/true);
        if (eof()) fail("Malformed", "document contains no root element");
        XmlElement root = parse_element();
        skip_misc(false);
        if (!eof()) fail("Malformed", "content after the root element");
        return root;
    }

private:
    [[noreturn]] void fail(const char* code, const std::string& msg) const {
        fail_at(line_, col_, code, msg);
    }
    [[noreturn]] static void fail_at(int line, int col, const char* code, const std::string& msg) {
        throw ParseError(line, col, code, msg);
    }

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    bool starts_with(const char* s) const { return text_.compare(pos_, std::strlen(s), s) == 0; }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void expect(char c, const char* what) {
        if (eof() || peek() != c) fail("Malformed", std::string("expected ") + what);
        advance();
    }

    static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }
    static bool is_name_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
    }
    static bool is_name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '.' ||
               c == '-';
    }

    void skip_whitespace() {
        while (!eof() && is_space(peek())) advance();
    }

    void skip_comment() {
        // positioned at "<!--"
        for (int i = 0; i < 4; ++i) advance();
        while (!starts_with("-->")) {
            if (eof()) fail("Malformed", "unterminated comment");
            advance();
        }
        for (int i = 0; i < 3; ++i) advance();
    }

    void skip_misc(bool allow_declaration) {
        for (;;) {
            skip_whitespace();
            if (eof()) return;
            if (starts_with("<!--")) {
                skip_comment();
            } else if (allow_declaration && starts_with("<?xml")) {
                while (!starts_with("?>")) {
                    if (eof()) fail("Malformed", "unterminated XML declaration");
                    advance();
                }
                advance();
                advance();
                allow_declaration = false;
            } else if (peek() != '<') {
                fail("UnexpectedText", "text content is not allowed here");
            } else {
                return;
            }
        }
    }

    std::string parse_name() {
        if (eof() || !is_name_start(peek())) fail("Malformed", "expected a name");
        std::string name;
        while (!eof() && is_name_char(peek())) name += advance();
        return name;
    }

    std::string parse_attr_value() {
        if (eof() || (peek() != '"' && peek() != '\'')) fail("Malformed", "expected a quoted value");
        const char quote = advance();
        std::string value;
        for (;;) {
            if (eof()) fail("Malformed", "unterminated attribute value");
            char c = peek();
            if (c == quote) {
                advance();
                return value;
            }
            if (c == '<') fail("Malformed", "raw '<' in attribute value");
            if (c == '&') {
                value += parse_entity();
            } else {
                value += advance();
            }
        }
    }

    std::string parse_entity() {
        int eline = line_, ecol = col_;
        advance(); // '&'
        std::string name;
        while (!eof() && peek() != ';' && name.size() < 12) name += advance();
        if (eof() || peek() != ';') fail_at(eline, ecol, "Malformed", "unterminated entity");
        advance();
        if (name == "amp") return "&";
        if (name == "lt") return "<";
        if (name == "gt") return ">";
        if (name == "quot") return "\"";
        if (name == "apos") return "'";
        if (name.size() > 1 && name[0] == '#') {
            long cp = -1;
            try {
                cp = name[1] == 'x' || name[1] == 'X' ? std::stol(name.substr(2), nullptr, 16)
                                                      : std::stol(name.substr(1), nullptr, 10);
            } catch (...) {
            }
            if (cp >= 0 && cp < 128) return std::string(1, static_cast<char>(cp));
        }
        fail_at(eline, ecol, "Malformed", "unsupported entity '&" + name + ";'");
    }

    XmlElement parse_element() {
        XmlElement elem;
        elem.line = line_;
        elem.col = col_;
        expect('<', "'<'");
        elem.name = parse_name();

        for (;;) {
            bool had_space = !eof() && is_space(peek());
            skip_whitespace();
            if (eof()) fail("Malformed", "unterminated element '" + elem.name + "'");
            if (peek() == '/') {
                advance();
                expect('>', "'>'");
                return elem;
            }
            if (peek() == '>') {
                advance();
                parse_content(elem);
                return elem;
            }
            if (!had_space) fail("Malformed", "expected whitespace before attribute");
            XmlAttr attr;
            attr.line = line_;
            attr.col = col_;
            attr.name = parse_name();
            skip_whitespace();
            expect('=', "'='");
            skip_whitespace();
            attr.value = parse_attr_value();
            for (const auto& existing : elem.attrs)
                if (existing.name == attr.name)
                    fail_at(attr.line, attr.col, "DuplicateAttribute",
                            "attribute '" + attr.name + "' appears twice");
            elem.attrs.push_back(std::move(attr));
        }
    }

    void parse_content(XmlElement& elem) {
        for (;;) {
            int tline = line_, tcol = col_;
            while (!eof() && peek() != '<') {
                if (!is_space(peek()))
                    fail_at(tline, tcol, "UnexpectedText", "text content is not allowed here");
                advance();
            }
            if (eof()) fail("Malformed", "unterminated element '" + elem.name + "'");
            if (starts_with("<!--")) {
                skip_comment();
                continue;
            }
            if (starts_with("</")) {
                advance();
                advance();
                std::string name = parse_name();
                if (name != elem.name)
                    fail("Malformed",
                         "mismatched closing tag '" + name + "' for '" + elem.name + "'");
                skip_whitespace();
                expect('>', "'>'");
                return;
            }
            if (starts_with("<!") || starts_with("<?"))
                fail("Malformed", "unsupported markup");
            elem.children.push_back(parse_element());
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

// ---- schema mapping ---------------------------------------------------

const XmlAttr* find_attr(const XmlElement& e, const std::string& name) {
    for (const auto& a : e.attrs)
        if (a.name == name) return &a;
    return nullptr;
}

std::string require_attr(const XmlElement& e, const std::string& name) {
    const XmlAttr* a = find_attr(e, name);
    if (!a)
        throw ParseError(e.line, e.col, "MissingAttribute",
                         "element '" + e.name + "' requires attribute '" + name + "'");
    return a->value;
}

void check_attrs(const XmlElement& e, std::initializer_list<const char*> known) {
    for (const auto& a : e.attrs) {
        bool ok = std::any_of(known.begin(), known.end(),
                              [&](const char* k) { return a.name == k; });
        if (!ok)
            throw ParseError(a.line, a.col, "UnknownAttribute",
                             "attribute '" + a.name + "' is not allowed on '" + e.name + "'");
    }
}

void forbid_children(const XmlElement& e) {
    if (!e.children.empty()) {
        const auto& c = e.children.front();
        throw ParseError(c.line, c.col, "UnknownElement",
                         "element '" + c.name + "' is not allowed inside '" + e.name + "'");
    }
}

double numeric_attr(const XmlElement& e, const std::string& name) {
    const XmlAttr* a = find_attr(e, name);
    if (!a)
        throw ParseError(e.line, e.col, "MissingAttribute",
                         "element '" + e.name + "' requires attribute '" + name + "'");
    double value;
    if (!parse_double(a->value, value))
        throw ParseError(a->line, a->col, "BadNumber",
                         "attribute '" + name + "' is not a finite number: '" + a->value + "'");
    return value;
}

DelayDistribution parse_delay(const XmlElement& e) {
    forbid_children(e);
    const std::string kind = require_attr(e, "kind");
    if (kind == "constant") {
        check_attrs(e, {"kind", "value"});
        return DelayDistribution::constant(numeric_attr(e, "value"));
    }
    if (kind == "uniform") {
        check_attrs(e, {"kind", "min", "max"});
        return DelayDistribution::uniform(numeric_attr(e, "min"), numeric_attr(e, "max"));
    }
    if (kind == "exponential") {
        check_attrs(e, {"kind", "mean"});
        return DelayDistribution::exponential(numeric_attr(e, "mean"));
    }
    if (kind == "truncated_normal") {
        check_attrs(e, {"kind", "mean", "sd"});
        return DelayDistribution::truncated_normal(numeric_attr(e, "mean"), numeric_attr(e, "sd"));
    }
    const XmlAttr* a = find_attr(e, "kind");
    throw ParseError(a->line, a->col, "UnknownDelayKind", "unknown delay kind '" + kind + "'");
}

std::vector<std::string> split_stop_list(const std::string& value) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < value.size()) {
        while (i < value.size() && value[i] == ' ') ++i;
        std::size_t j = i;
        while (j < value.size() && value[j] != ' ') ++j;
        if (j > i) out.push_back(value.substr(i, j - i));
        i = j;
    }
    return out;
}

Transition parse_transition(const XmlElement& e) {
    check_attrs(e, {"from", "to", "p", "label"});
    Transition t;
    t.from = require_attr(e, "from");
    t.to = require_attr(e, "to");
    t.probability = numeric_attr(e, "p");
    if (const XmlAttr* label = find_attr(e, "label")) t.label = label->value;

    bool have_delay = false;
    for (const auto& c : e.children) {
        if (c.name != "delay")
            throw ParseError(c.line, c.col, "UnknownElement",
                             "element '" + c.name + "' is not allowed inside 'transition'");
        if (have_delay)
            throw ParseError(c.line, c.col, "DuplicateElement",
                             "transition has more than one delay");
        t.delay = parse_delay(c);
        have_delay = true;
    }
    if (!have_delay)
        throw ParseError(e.line, e.col, "MissingDelay", "transition requires a delay child");
    return t;
}

void parse_overhead(const XmlElement& e, StsModel& model) {
    check_attrs(e, {});
    for (const auto& c : e.children) {
        if (c.name == "in") {
            if (model.overhead_in)
                throw ParseError(c.line, c.col, "DuplicateElement",
                                 "overhead has more than one 'in'");
            model.overhead_in = parse_delay(c);
        } else if (c.name == "out") {
            if (model.overhead_out)
                throw ParseError(c.line, c.col, "DuplicateElement",
                                 "overhead has more than one 'out'");
            model.overhead_out = parse_delay(c);
        } else {
            throw ParseError(c.line, c.col, "UnknownElement",
                             "element '" + c.name + "' is not allowed inside 'overhead'");
        }
    }
}

} // namespace

StsModel parse_model(const std::string& text) {
    XmlElement root = XmlReader(text).parse_document();
    if (root.name != "sts")
        throw ParseError(root.line, root.col, "WrongRoot",
                         "root element must be 'sts', got '" + root.name + "'");
    check_attrs(root, {"name", "timeUnit", "start", "stop"});

    StsModel model;
    model.name = require_attr(root, "name");
    model.time_unit = require_attr(root, "timeUnit");
    if (model.time_unit != "ms") {
        const XmlAttr* a = find_attr(root, "timeUnit");
        throw ParseError(a->line, a->col, "BadTimeUnit",
                         "timeUnit must be 'ms', got '" + model.time_unit + "'");
    }
    model.start = require_attr(root, "start");
    model.stop = split_stop_list(require_attr(root, "stop"));
    if (model.stop.empty()) {
        const XmlAttr* a = find_attr(root, "stop");
        throw ParseError(a->line, a->col, "EmptyStop", "stop list holds no state ids");
    }

    bool have_overhead = false;
    for (const auto& c : root.children) {
        if (c.name == "state") {
            check_attrs(c, {"id"});
            forbid_children(c);
            model.states.push_back(require_attr(c, "id"));
        } else if (c.name == "transition") {
            model.transitions.push_back(parse_transition(c));
        } else if (c.name == "overhead") {
            if (have_overhead)
                throw ParseError(c.line, c.col, "DuplicateElement",
                                 "model has more than one overhead element");
            parse_overhead(c, model);
            have_overhead = true;
        } else {
            throw ParseError(c.line, c.col, "UnknownElement",
                             "element '" + c.name + "' is not allowed inside 'sts'");
        }
    }
    return model;
}

namespace {

std::string escape_attr(const std::string& value) {
    std::string out;
    out.reserve(value.size());
    for (char c : value) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

void append_delay_attrs(std::string& out, const DelayDistribution& d) {
    switch (d.kind) {
    case DelayKind::Constant:
        out += " kind=\"constant\" value=\"" + format_shortest(d.a) + "\"";
        break;
    case DelayKind::Uniform:
        out += " kind=\"uniform\" min=\"" + format_shortest(d.a) + "\" max=\"" +
               format_shortest(d.b) + "\"";
        break;
    case DelayKind::Exponential:
        out += " kind=\"exponential\" mean=\"" + format_shortest(d.a) + "\"";
        break;
    case DelayKind::TruncatedNormal:
        out += " kind=\"truncated_normal\" mean=\"" + format_shortest(d.a) + "\" sd=\"" +
               format_shortest(d.b) + "\"";
        break;
    }
}

} // namespace

std::string serialize_model(const StsModel& model) {
    std::string out;
    out += "<sts name=\"" + escape_attr(model.name) + "\" timeUnit=\"" +
           escape_attr(model.time_unit) + "\" start=\"" + escape_attr(model.start) + "\" stop=\"";
    for (std::size_t i = 0; i < model.stop.size(); ++i) {
        if (i) out += ' ';
        out += escape_attr(model.stop[i]);
    }
    out += "\">\n";

    for (const auto& id : model.states) out += "  <state id=\"" + escape_attr(id) + "\"/>\n";

    for (const auto& t : model.transitions) {
        out += "  <transition from=\"" + escape_attr(t.from) + "\" to=\"" + escape_attr(t.to) +
               "\" p=\"" + format_shortest(t.probability) + "\"";
        if (t.label) out += " label=\"" + escape_attr(*t.label) + "\"";
        out += ">\n    <delay";
        append_delay_attrs(out, t.delay);
        out += "/>\n  </transition>\n";
    }

    if (model.overhead_in || model.overhead_out) {
        out += "  <overhead>\n";
        if (model.overhead_in) {
            out += "    <in";
            append_delay_attrs(out, *model.overhead_in);
            out += "/>\n";
        }
        if (model.overhead_out) {
            out += "    <out";
            append_delay_attrs(out, *model.overhead_out);
            out += "/>\n";
        }
        out += "  </overhead>\n";
    }
    out += "</sts>\n";
    return out;
}

} // namespace stsperf
