#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "stsperf/model.hpp"
#include "stsperf/rng.hpp"

namespace stsperf {

// Hard ceiling on inlined program size. Branch suffixes are duplicated per
// case by design, which is exponential in the worst case.
inline constexpr std::size_t kMaxIrStatements = 100'000;

struct Stmt;

// Ordered statement list: the body of a whole program or of one branch case.
struct Block {
    std::vector<Stmt> stmts;
    bool operator==(const Block& other) const;
};

struct BranchCase {
    double probability = 0.0;
    Block body;
    bool operator==(const BranchCase&) const = default;
};

enum class StmtKind { Delay, Branch };

// One statement of the generated simulation script: either "wait for one
// draw from `delay`" or "draw once and run the chosen case". Cases keep
// document order and carry their full suffix inline, so rendered output
// reads straight down with no joins.
struct Stmt {
    StmtKind kind = StmtKind::Delay;
    DelayDistribution delay;       // meaningful when kind == Delay
    std::vector<BranchCase> cases; // meaningful when kind == Branch; >= 2 entries

    static Stmt make_delay(const DelayDistribution& d) {
        Stmt s;
        s.delay = d;
        return s;
    }
    static Stmt make_branch(std::vector<BranchCase> cases) {
        Stmt s;
        s.kind = StmtKind::Branch;
        s.cases = std::move(cases);
        return s;
    }
    bool operator==(const Stmt&) const = default;
};

inline bool Block::operator==(const Block& other) const { return stmts == other.stmts; }

// Target-neutral intermediate form of the simulation script. interpret_ir
// gives it semantics; render gives it a surface syntax.
struct SimProgram {
    Block body;
    bool operator==(const SimProgram&) const = default;
};

std::size_t stmt_count(const Block& block); // nested statements included

// Compiles an acyclic model into a SimProgram: one DelayStmt per traversed
// transition, one BranchStmt per multi-way state, each case fully inlining
// its suffix down to a stop state.
//
// Throws CyclicModel, IrTooLarge (kMaxIrStatements exceeded), DeadEnd.
SimProgram build_ir(const StsModel& model);

// Executes the program, returning the accumulated delay. Draws from `rng`
// exactly as simulate_run does on the source model — same count, same order —
// so for any seed the result is bit-identical to simulate_run's service
// time. That equivalence is the correctness argument for the generator.
double interpret_ir(const SimProgram& ir, RngStream& rng);

// A rendering skin. Sections hold verbatim output lines whose placeholders
// are filled per statement:
//   {INDENT}     two spaces per nesting level
//   {DIST}       the delay distribution, e.g. "Uniform(0,4)"
//   {THRESHOLD}  cumulative case probability, shortest round-trip decimal
// Only branch_case/_last may use {THRESHOLD}; only delay may use {DIST};
// prologue and epilogue are emitted untouched.
struct RenderTemplate {
    std::string name;
    std::vector<std::string> prologue;
    std::vector<std::string> delay;
    std::vector<std::string> branch_open;
    std::vector<std::string> branch_case;
    std::vector<std::string> branch_case_last; // empty: branch_case is reused
    std::vector<std::string> branch_close;
    std::vector<std::string> epilogue;
    bool operator==(const RenderTemplate&) const = default;
};

// Template file syntax: "[section]" headers, one per line; every line until
// the next header belongs to that section verbatim (blank lines included).
// '#' comments are allowed only before the first header. All sections except
// branch_case_last are required, though they may be empty.
//
// Throws BadTemplate (syntax, unknown/duplicate/missing section),
// UnresolvedPlaceholder (placeholder outside a section's allowed set).
RenderTemplate parse_template(const std::string& name, const std::string& text);

// Accepts a built-in name ("fig4", "pseudocode") or a path to a template
// file. Throws TemplateNotFound when it is neither.
RenderTemplate load_template(const std::string& name_or_path);
std::vector<std::string> builtin_template_names();

std::string format_distribution(const DelayDistribution& d);

// Deterministic text rendering: prologue, statements, epilogue. Branch
// thresholds are the running cumulative probabilities; the last case gets
// the cumulative value *before* it (the "otherwise above this" reading).
//
// Throws UnresolvedPlaceholder; the string overload also TemplateNotFound.
std::string render(const SimProgram& ir, const RenderTemplate& tmpl);
std::string render(const SimProgram& ir, const std::string& template_name_or_path);

} // namespace stsperf
