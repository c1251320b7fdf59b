#include <doctest.h>

#include <functional>
#include <string>
#include <vector>

#include "stsperf/codegen.hpp"
#include "stsperf/engine.hpp"
#include "stsperf/error.hpp"
#include "support.hpp"

using namespace stsperf;
using namespace testsupport;

namespace {

std::string thrown_code(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const StsError& e) {
        return e.code();
    }
    return "";
}

// D diamond stages in a row, each one a 2-way branch whose cases rejoin:
// suffix inlining makes the program size roughly 5 * 2^D statements.
StsModel diamond_chain(int depth) {
    StsModel m;
    m.name = "diamonds";
    m.start = "n0";
    m.stop = {"n" + std::to_string(depth)};
    const auto d = DelayDistribution::constant(1);
    for (int i = 0; i <= depth; ++i) m.states.push_back("n" + std::to_string(i));
    for (int i = 0; i < depth; ++i) {
        const std::string from = "n" + std::to_string(i);
        const std::string to = "n" + std::to_string(i + 1);
        const std::string mid = from + "x";
        m.states.push_back(mid);
        m.transitions.push_back({from, to, 0.5, d, {}});
        m.transitions.push_back({from, mid, 0.5, d, {}});
        m.transitions.push_back({mid, to, 1.0, d, {}});
    }
    return m;
}

} // namespace

TEST_CASE("build_ir of a plain chain") {
    const SimProgram ir = build_ir(load_fixture("chain2.xml"));
    REQUIRE(ir.body.stmts.size() == 2);
    CHECK(ir.body.stmts[0] == Stmt::make_delay(DelayDistribution::constant(2)));
    CHECK(ir.body.stmts[1] == Stmt::make_delay(DelayDistribution::constant(3)));
    CHECK(stmt_count(ir.body) == 2);
}

TEST_CASE("build_ir inlines branch suffixes") {
    const SimProgram ir = build_ir(load_fixture("creditadd.xml"));

    // Two leading delays, then one branch whose cases run to the stop state.
    REQUIRE(ir.body.stmts.size() == 3);
    CHECK(ir.body.stmts[0].kind == StmtKind::Delay);
    CHECK(ir.body.stmts[0].delay == DelayDistribution::uniform(0, 4));
    CHECK(ir.body.stmts[1].delay == DelayDistribution::uniform(1, 4));

    const Stmt& branch = ir.body.stmts[2];
    REQUIRE(branch.kind == StmtKind::Branch);
    REQUIRE(branch.cases.size() == 2);

    CHECK(branch.cases[0].probability == 0.1);
    REQUIRE(branch.cases[0].body.stmts.size() == 2);
    CHECK(branch.cases[0].body.stmts[0].delay == DelayDistribution::uniform(1, 1));
    CHECK(branch.cases[0].body.stmts[1].delay == DelayDistribution::uniform(1, 1));

    CHECK(branch.cases[1].probability == 0.9);
    REQUIRE(branch.cases[1].body.stmts.size() == 2);
    CHECK(branch.cases[1].body.stmts[0].delay == DelayDistribution::uniform(4, 7));
    CHECK(branch.cases[1].body.stmts[1].delay == DelayDistribution::uniform(2, 9));

    CHECK(stmt_count(ir.body) == 7);
}

TEST_CASE("build_ir case fan-out matches the model") {
    const SimProgram ir = build_ir(load_fixture("branch3.xml"));
    REQUIRE(ir.body.stmts.size() == 1);
    REQUIRE(ir.body.stmts[0].kind == StmtKind::Branch);
    CHECK(ir.body.stmts[0].cases.size() == 3);
    for (const BranchCase& c : ir.body.stmts[0].cases)
        CHECK(c.body.stmts.size() == 2); // edge delay + one suffix delay
}

TEST_CASE("build_ir failure modes") {
    CHECK(thrown_code([] { build_ir(load_fixture("geometric.xml")); }) == "CyclicModel");
    CHECK(thrown_code([] { build_ir(diamond_chain(16)); }) == "IrTooLarge");
    // f(D) = 4 (2^D - 1): one branch + two delays per stage, suffix doubled
    CHECK(stmt_count(build_ir(diamond_chain(8)).body) == 4 * ((1 << 8) - 1));
}

TEST_CASE("interpret_ir sums delays") {
    SimProgram ir;
    ir.body.stmts.push_back(Stmt::make_delay(DelayDistribution::constant(5)));
    ir.body.stmts.push_back(Stmt::make_delay(DelayDistribution::constant(2.5)));
    RngStream rng(0);
    RngStream before = rng;
    CHECK(interpret_ir(ir, rng) == 7.5);
    CHECK(rng == before); // constants draw nothing
}

TEST_CASE("interpret_ir picks cases with one draw") {
    Block hi;
    hi.stmts.push_back(Stmt::make_delay(DelayDistribution::constant(10)));
    Block lo;
    lo.stmts.push_back(Stmt::make_delay(DelayDistribution::constant(1)));
    SimProgram ir;
    ir.body.stmts.push_back(Stmt::make_branch({{0.1, lo}, {0.9, hi}}));

    int saw_lo = 0, saw_hi = 0;
    RngStream rng(17);
    for (int i = 0; i < 1000; ++i) {
        RngStream probe = rng; // same state the interpreter will consume
        const double u = probe.next_unit();
        const double t = interpret_ir(ir, rng);
        CHECK(rng == probe); // exactly one draw
        CHECK(t == (u < 0.1 ? 1.0 : 10.0));
        (t == 1.0 ? saw_lo : saw_hi)++;
    }
    CHECK(saw_lo > 50);
    CHECK(saw_hi > 700);
}

TEST_CASE("interpreted program reproduces the engine bit for bit") {
    for (const char* name : {"creditadd.xml", "chain2.xml", "branch3.xml", "nested.xml",
                             "degenerate.xml", "overhead.xml"}) {
        CAPTURE(name);
        const StsModel model = load_fixture(name);
        const RunGraph graph = build_run_graph(model);
        const SimProgram ir = build_ir(model);
        for (std::uint64_t i = 0; i < 300; ++i) {
            RngStream a = RngStream::for_replication(2026, i);
            RngStream b = RngStream::for_replication(2026, i);
            const double engine_t = simulate_run(model, graph, a, 10000).service_time;
            const double ir_t = interpret_ir(ir, b);
            CHECK(engine_t == ir_t);
        }
    }
}

TEST_CASE("format_distribution") {
    CHECK(format_distribution(DelayDistribution::constant(5)) == "Constant(5)");
    CHECK(format_distribution(DelayDistribution::uniform(0, 4)) == "Uniform(0,4)");
    CHECK(format_distribution(DelayDistribution::uniform(0.5, 2.25)) == "Uniform(0.5,2.25)");
    CHECK(format_distribution(DelayDistribution::exponential(3)) == "Exponential(3)");
    CHECK(format_distribution(DelayDistribution::truncated_normal(3, 0.5)) ==
          "TruncatedNormal(3,0.5)");
}

TEST_CASE("render matches the golden script") {
    const SimProgram ir = build_ir(load_fixture("creditadd.xml"));
    const std::string text = render(ir, "fig4");
    CHECK(text == slurp(golden_path("creditadd.fig4.txt")));
    CHECK(render(ir, "fig4") == text); // rendering is a pure function
}

TEST_CASE("render nests indentation two spaces per level") {
    const SimProgram ir = build_ir(load_fixture("nested.xml"));
    const std::string text = render(ir, "pseudocode");
    CHECK(contains(text, "begin\n"));
    CHECK(contains(text, "  wait Uniform(0,2)\n"));          // depth 1
    CHECK(contains(text, "  draw u\n"));                     // branch at depth 1
    CHECK(contains(text, "    when u <= 0.4:\n"));           // its cases, depth 2
    CHECK(contains(text, "      wait Constant(1)\n"));       // case body, depth 3
    CHECK(contains(text, "      draw u\n"));                 // nested branch, depth 3
    CHECK(contains(text, "        when u <= 0.5:\n"));       // depth 4
    CHECK(contains(text, "          wait Constant(2)\n"));   // depth 5
    CHECK(contains(text, "    otherwise:\n"));               // outer last case
    CHECK(contains(text, "end\n"));
}

TEST_CASE("branch thresholds are cumulative; the last case shows the floor") {
    const SimProgram ir = build_ir(load_fixture("branch3.xml"));
    const std::string text = render(ir, "pseudocode");
    CHECK(contains(text, "when u <= 0.2:"));
    CHECK(contains(text, "when u <= 0.5:")); // 0.2 + 0.3
    // last case: "above everything before it", so the threshold is 0.5, not 1
    CHECK(contains(text, "otherwise:"));
    CHECK(!contains(text, "u <= 1:"));

    const std::string fig4 = render(ir, "fig4");
    CHECK(contains(fig4, "case pevent <= 0.2:"));
    CHECK(contains(fig4, "case pevent <= 0.5:"));
    CHECK(contains(fig4, "case pevent > 0.5:"));
}

TEST_CASE("render of an empty program is prologue plus epilogue") {
    const std::string text = render(SimProgram{}, "fig4");
    CHECK(contains(text, "public long EvaluateServiceTime() {"));
    CHECK(contains(text, "return System.currentTimeMillis() - beginT;"));
    CHECK(!contains(text, "Delay("));
    CHECK(!contains(text, "switch"));
}

TEST_CASE("template loading") {
    const auto builtins = builtin_template_names();
    CHECK(builtins == std::vector<std::string>{"fig4", "pseudocode"});

    CHECK(load_template("fig4").name == "fig4");
    CHECK(load_template("pseudocode").branch_close.empty());
    CHECK(thrown_code([] { load_template("nope"); }) == "TemplateNotFound");
    CHECK(thrown_code([] { load_template("/no/such/file.tmpl"); }) == "TemplateNotFound");

    // Loading from an explicit path must agree with the embedded copy.
    const RenderTemplate from_file =
        parse_template("fig4", slurp(std::string(STSPERF_TEMPLATE_DIR) + "/fig4.tmpl"));
    RenderTemplate builtin = load_template("fig4");
    builtin.name = from_file.name;
    CHECK(from_file == builtin);
}

TEST_CASE("template parsing rejects malformed input") {
    const std::string ok = "[prologue]\n[delay]\n{INDENT}wait {DIST}\n[branch_open]\n"
                           "[branch_case]\n{INDENT}case {THRESHOLD}\n[branch_close]\n"
                           "[epilogue]\n";
    CHECK_NOTHROW(parse_template("t", ok));

    CHECK(thrown_code([] { parse_template("t", "[delay]\n"); }) == "BadTemplate"); // missing
    CHECK(thrown_code([] { parse_template("t", "[bogus]\n"); }) == "BadTemplate");
    CHECK(thrown_code([&] { parse_template("t", ok + "[delay]\n"); }) == "BadTemplate");
    CHECK(thrown_code([] { parse_template("t", "stray line\n[prologue]\n"); }) == "BadTemplate");

    // '#' comments are fine before the first header, verbatim after.
    const RenderTemplate commented = parse_template("t", "# note\n" + ok);
    CHECK(commented.delay == std::vector<std::string>{"{INDENT}wait {DIST}"});
    const RenderTemplate hash_body = parse_template("t", ok + "[branch_case_last]\n# kept\n");
    CHECK(hash_body.branch_case_last == std::vector<std::string>{"# kept"});
}

TEST_CASE("placeholders are checked per section") {
    const std::string base = "[prologue]\n[delay]\nwait {DIST}\n[branch_open]\n"
                             "[branch_case]\ncase {THRESHOLD}\n[branch_close]\n[epilogue]\n";
    CHECK_NOTHROW(parse_template("t", base));

    auto swap_section = [&](const std::string& from, const std::string& to) {
        std::string s = base;
        s.replace(s.find(from), from.size(), to);
        return s;
    };
    // {DIST} outside [delay], {THRESHOLD} outside case sections, {INDENT} in
    // the prologue, and an unknown token are all refused at parse time.
    CHECK(thrown_code([&] { parse_template("t", swap_section("[prologue]\n", "[prologue]\n{DIST}\n")); }) ==
          "UnresolvedPlaceholder");
    CHECK(thrown_code([&] { parse_template("t", swap_section("wait {DIST}", "wait {THRESHOLD}")); }) ==
          "UnresolvedPlaceholder");
    CHECK(thrown_code([&] { parse_template("t", swap_section("[prologue]\n", "[prologue]\n{INDENT}x\n")); }) ==
          "UnresolvedPlaceholder");
    CHECK(thrown_code([&] { parse_template("t", swap_section("wait {DIST}", "wait {WHAT}")); }) ==
          "UnresolvedPlaceholder");
    // Braces that do not form a placeholder token pass through untouched.
    CHECK_NOTHROW(parse_template("t", swap_section("wait {DIST}", "if {} then { x }")));
}

TEST_CASE("render falls back to branch_case when branch_case_last is absent") {
    RenderTemplate t;
    t.name = "bare";
    t.delay = {"{INDENT}d {DIST}"};
    t.branch_case = {"{INDENT}c {THRESHOLD}"};

    const SimProgram ir = build_ir(load_fixture("branch3.xml"));
    const std::string text = render(ir, t);
    CHECK(contains(text, "    c 0.2\n"));
    CHECK(contains(text, "    c 0.5\n"));
    // the last case reuses branch_case, still with the floor threshold
    CHECK(text.find("c 0.5\n") != text.rfind("c 0.5\n"));
}
