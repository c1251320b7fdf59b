#include "stsperf/codegen.hpp"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string_view>
#include <utility>

#include "stsperf/embedded_templates.hpp"
#include "stsperf/engine.hpp"
#include "stsperf/error.hpp"
#include "stsperf/graph.hpp"
#include "stsperf/numfmt.hpp"

namespace stsperf {

std::size_t stmt_count(const Block& block) {
    std::size_t n = 0;
    for (const Stmt& s : block.stmts) {
        ++n;
        if (s.kind == StmtKind::Branch)
            for (const BranchCase& c : s.cases) n += stmt_count(c.body);
    }
    return n;
}

SimProgram build_ir(const StsModel& model) {
    const RunGraph g = build_run_graph(model);
    if (auto cyc = find_cycle(g))
        throw StsError("CyclicModel",
                       "cycle through state '" + *cyc + "'; cannot inline an unbounded walk");

    std::size_t count = 0;
    auto bump = [&count] {
        if (++count > kMaxIrStatements)
            throw StsError("IrTooLarge", "inlined program exceeds " +
                                             std::to_string(kMaxIrStatements) + " statements");
    };

    auto emit = [&](auto&& self, std::size_t node, Block& blk) -> void {
        while (!g.node_is_stop[node]) {
            const auto& out = g.node_outgoing[node];
            if (out.empty())
                throw StsError("DeadEnd", "non-stop state '" + g.node_ids[node] +
                                              "' has no outgoing transition");
            if (out.size() == 1) {
                bump();
                blk.stmts.push_back(Stmt::make_delay(model.transitions[out[0]].delay));
                node = g.transition_target[out[0]];
                continue;
            }
            Stmt branch;
            branch.kind = StmtKind::Branch;
            for (std::size_t t : out) {
                BranchCase c;
                c.probability = model.transitions[t].probability;
                bump();
                c.body.stmts.push_back(Stmt::make_delay(model.transitions[t].delay));
                self(self, g.transition_target[t], c.body);
                branch.cases.push_back(std::move(c));
            }
            bump();
            blk.stmts.push_back(std::move(branch));
            return; // the cases carried every suffix; nothing follows a branch
        }
    };

    SimProgram prog;
    emit(emit, g.start_node, prog.body);
    return prog;
}

namespace {

void run_block(const Block& blk, RngStream& rng, double& total) {
    for (const Stmt& s : blk.stmts) {
        if (s.kind == StmtKind::Delay) {
            total += sample_delay(s.delay, rng);
        } else {
            std::vector<double> probs;
            probs.reserve(s.cases.size());
            for (const BranchCase& c : s.cases) probs.push_back(c.probability);
            run_block(s.cases[choose_transition(probs, rng)].body, rng, total);
        }
    }
}

} // namespace

double interpret_ir(const SimProgram& ir, RngStream& rng) {
    double total = 0.0;
    run_block(ir.body, rng, total);
    return total;
}

// ---- templates -------------------------------------------------------------

namespace {

constexpr std::string_view kSectionNames[] = {
    "prologue", "delay", "branch_open", "branch_case", "branch_case_last", "branch_close",
    "epilogue",
};

std::vector<std::string>* section_of(RenderTemplate& t, std::string_view name) {
    if (name == "prologue") return &t.prologue;
    if (name == "delay") return &t.delay;
    if (name == "branch_open") return &t.branch_open;
    if (name == "branch_case") return &t.branch_case;
    if (name == "branch_case_last") return &t.branch_case_last;
    if (name == "branch_close") return &t.branch_close;
    if (name == "epilogue") return &t.epilogue;
    return nullptr;
}

bool placeholder_allowed(std::string_view section, std::string_view token) {
    if (token == "INDENT") return section != "prologue" && section != "epilogue";
    if (token == "DIST") return section == "delay";
    if (token == "THRESHOLD") return section == "branch_case" || section == "branch_case_last";
    return false;
}

// Calls fn(token) for every {UPPER_CASE} occurrence; lone braces pass through.
template <typename Fn>
void for_each_placeholder(std::string_view line, Fn&& fn) {
    std::size_t i = 0;
    while ((i = line.find('{', i)) != std::string_view::npos) {
        std::size_t j = i + 1;
        while (j < line.size() && (std::isupper(static_cast<unsigned char>(line[j])) || line[j] == '_'))
            ++j;
        if (j > i + 1 && j < line.size() && line[j] == '}') {
            fn(line.substr(i + 1, j - i - 1));
            i = j + 1;
        } else {
            i = i + 1;
        }
    }
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        pos = nl + 1;
    }
    return lines;
}

} // namespace

RenderTemplate parse_template(const std::string& name, const std::string& text) {
    RenderTemplate t;
    t.name = name;
    std::vector<std::string>* section = nullptr;
    std::string section_name;
    std::vector<std::string> seen;

    const std::vector<std::string> lines = split_lines(text);
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const std::string& line = lines[n];
        auto fail = [&](const std::string& why) -> StsError {
            return StsError("BadTemplate",
                            "template '" + name + "' line " + std::to_string(n + 1) + ": " + why);
        };
        if (line.size() >= 2 && line.front() == '[' && line.back() == ']') {
            std::string header = line.substr(1, line.size() - 2);
            std::vector<std::string>* next = section_of(t, header);
            if (!next) throw fail("unknown section '[" + header + "]'");
            if (std::find(seen.begin(), seen.end(), header) != seen.end())
                throw fail("duplicate section '[" + header + "]'");
            seen.push_back(header);
            section = next;
            section_name = header;
            continue;
        }
        if (!section) {
            if (line.empty() || line.front() == '#') continue; // preamble comments
            throw fail("content before the first [section] header");
        }
        for_each_placeholder(line, [&](std::string_view token) {
            if (!placeholder_allowed(section_name, token))
                throw StsError("UnresolvedPlaceholder",
                               "template '" + name + "' line " + std::to_string(n + 1) +
                                   ": placeholder {" + std::string(token) +
                                   "} is not available in [" + section_name + "]");
        });
        section->push_back(line);
    }

    for (std::string_view required : kSectionNames) {
        if (required == "branch_case_last") continue;
        if (std::find(seen.begin(), seen.end(), required) == seen.end())
            throw StsError("BadTemplate",
                           "template '" + name + "' is missing section [" + std::string(required) + "]");
    }
    return t;
}

std::vector<std::string> builtin_template_names() { return {"fig4", "pseudocode"}; }

RenderTemplate load_template(const std::string& name_or_path) {
    if (name_or_path == "fig4") return parse_template("fig4", detail::kFig4Template);
    if (name_or_path == "pseudocode")
        return parse_template("pseudocode", detail::kPseudocodeTemplate);

    std::ifstream in(name_or_path, std::ios::binary);
    if (!in)
        throw StsError("TemplateNotFound", "'" + name_or_path +
                                               "' is neither a built-in template (fig4, "
                                               "pseudocode) nor a readable file");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_template(std::filesystem::path(name_or_path).stem().string(), text);
}

std::string format_distribution(const DelayDistribution& d) {
    switch (d.kind) {
    case DelayKind::Constant:
        return "Constant(" + format_shortest(d.a) + ")";
    case DelayKind::Uniform:
        return "Uniform(" + format_shortest(d.a) + "," + format_shortest(d.b) + ")";
    case DelayKind::Exponential:
        return "Exponential(" + format_shortest(d.a) + ")";
    case DelayKind::TruncatedNormal:
        return "TruncatedNormal(" + format_shortest(d.a) + "," + format_shortest(d.b) + ")";
    }
    return {};
}

namespace {

struct Substitution {
    std::string_view token;
    std::string value;
};

std::string expand(const std::string& pattern, const std::vector<Substitution>& subs,
                   const std::string& template_name) {
    std::string out = pattern;
    for (const Substitution& s : subs) {
        const std::string key = "{" + std::string(s.token) + "}";
        std::size_t pos = 0;
        while ((pos = out.find(key, pos)) != std::string::npos) {
            out.replace(pos, key.size(), s.value);
            pos += s.value.size();
        }
    }
    for_each_placeholder(out, [&](std::string_view token) {
        throw StsError("UnresolvedPlaceholder", "template '" + template_name +
                                                    "': no value for placeholder {" +
                                                    std::string(token) + "}");
    });
    return out;
}

class Renderer {
public:
    Renderer(const RenderTemplate& t) : t_(t) {}

    std::string run(const SimProgram& ir) {
        for (const std::string& line : t_.prologue) out_.push_back(expand(line, {}, t_.name));
        block(ir.body, 1);
        for (const std::string& line : t_.epilogue) out_.push_back(expand(line, {}, t_.name));
        std::string text;
        for (const std::string& line : out_) {
            text += line;
            text += '\n';
        }
        return text;
    }

private:
    static std::string indent(std::size_t depth) { return std::string(2 * depth, ' '); }

    void emit(const std::vector<std::string>& section, std::vector<Substitution> subs) {
        for (const std::string& line : section) out_.push_back(expand(line, subs, t_.name));
    }

    void block(const Block& blk, std::size_t depth) {
        for (const Stmt& s : blk.stmts) {
            if (s.kind == StmtKind::Delay) {
                emit(t_.delay, {{"INDENT", indent(depth)}, {"DIST", format_distribution(s.delay)}});
                continue;
            }
            emit(t_.branch_open, {{"INDENT", indent(depth)}});
            double cumulative = 0.0;
            for (std::size_t i = 0; i < s.cases.size(); ++i) {
                const bool last = i + 1 == s.cases.size();
                if (!last) cumulative += s.cases[i].probability;
                // The last case's threshold is the cumulative mass *before*
                // it: "everything above".
                const auto& pattern =
                    last && !t_.branch_case_last.empty() ? t_.branch_case_last : t_.branch_case;
                emit(pattern, {{"INDENT", indent(depth + 1)},
                               {"THRESHOLD", format_shortest(cumulative)}});
                block(s.cases[i].body, depth + 2);
            }
            emit(t_.branch_close, {{"INDENT", indent(depth)}});
        }
    }

    const RenderTemplate& t_;
    std::vector<std::string> out_;
};

} // namespace

std::string render(const SimProgram& ir, const RenderTemplate& tmpl) {
    return Renderer(tmpl).run(ir);
}

std::string render(const SimProgram& ir, const std::string& template_name_or_path) {
    return render(ir, load_template(template_name_or_path));
}

} // namespace stsperf
