#include "stsperf/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "stsperf/analytics.hpp"
#include "stsperf/codegen.hpp"
#include "stsperf/csv.hpp"
#include "stsperf/engine.hpp"
#include "stsperf/error.hpp"
#include "stsperf/model.hpp"
#include "stsperf/numfmt.hpp"
#include "stsperf/xml_io.hpp"

namespace stsperf {

namespace {

// Thrown after the diagnostic has already been printed.
struct CliExit {
    int code;
};

int exit_code_for(const std::string& error_code) {
    // Runtime failures: the input was acceptable, the execution was not.
    if (error_code == "NonTermination" || error_code == "DeadEnd" || error_code == "IoError" ||
        error_code == "SingularSystem")
        return 1;
    return 2; // everything else rejects the input
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StsError("IoError", "cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw StsError("IoError", "failed reading '" + path + "'");
    return std::move(buf).str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw StsError("IoError", "cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out.good()) throw StsError("IoError", "failed writing '" + path + "'");
}

void print_findings(const ValidationReport& report) {
    for (const Finding& f : report.findings) {
        std::cerr << (f.severity == Severity::Error ? "error: " : "warning: ") << f.code << ": "
                  << f.message;
        if (!f.location.empty()) std::cerr << " (" << f.location << ")";
        std::cerr << '\n';
    }
}

StsModel load_model(const std::string& path) {
    StsModel model = parse_model(read_file(path));
    ValidationReport report = validate(model);
    print_findings(report);
    if (!report.ok()) throw CliExit{2};
    return model;
}

unsigned thread_count() {
    const char* env = std::getenv("STSPERF_THREADS");
    if (!env || !*env) return 0; // auto
    unsigned v = 0;
    auto [p, ec] = std::from_chars(env, env + std::strlen(env), v);
    if (ec != std::errc{} || *p != '\0') {
        std::cerr << "warning: ignoring invalid STSPERF_THREADS='" << env << "'\n";
        return 0;
    }
    return v;
}

void print_summary(const SimulationSummary& s) {
    std::cout << "count=" << s.count << '\n'
              << "mean_ms=" << format_sig6(s.mean) << '\n'
              << "std_ms=" << format_sig6(s.std) << '\n'
              << "min_ms=" << format_sig6(s.min) << '\n'
              << "max_ms=" << format_sig6(s.max) << '\n'
              << "p50_ms=" << format_sig6(s.p50) << '\n'
              << "p90_ms=" << format_sig6(s.p90) << '\n'
              << "p95_ms=" << format_sig6(s.p95) << '\n'
              << "p99_ms=" << format_sig6(s.p99) << '\n'
              << "ci95_ms=" << format_sig6(s.ci95_halfwidth) << '\n';
}

int cmd_validate(const std::string& path) {
    StsModel model = parse_model(read_file(path));
    ValidationReport report = validate(model);
    print_findings(report);
    std::size_t errors = 0, warnings = 0;
    for (const Finding& f : report.findings)
        (f.severity == Severity::Error ? errors : warnings)++;
    std::cout << "errors=" << errors << '\n'
              << "warnings=" << warnings << '\n'
              << "valid=" << (report.ok() ? "true" : "false") << '\n';
    return report.ok() ? 0 : 2;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Service performance estimation from state-transition simulation models",
                 "stsperf"};
    app.require_subcommand(1);

    std::string val_file;
    auto* val = app.add_subcommand("validate", "Check a model file and report findings");
    val->add_option("file", val_file, "Model XML file")->required();

    std::string sim_file, sim_out, sim_measure = "service";
    std::uint64_t sim_runs = 10000, sim_seed = 0, sim_max_steps = 1'000'000;
    auto* sim = app.add_subcommand("simulate", "Run seeded replications and print a summary");
    sim->add_option("file", sim_file, "Model XML file")->required();
    sim->add_option("--runs", sim_runs, "Number of replications")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sim->add_option("--seed", sim_seed, "Base RNG seed")->capture_default_str();
    sim->add_option("--max-steps", sim_max_steps, "Per-run transition budget")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sim->add_option("--measure", sim_measure, "Which indicator the summary describes")
        ->check(CLI::IsMember({"service", "response"}))
        ->capture_default_str();
    sim->add_option("--out", sim_out, "Write per-run results to this CSV file");

    std::string ana_file;
    bool ana_paths = false;
    auto* ana = app.add_subcommand("analyze", "Exact analytic moments (and optional path table)");
    ana->add_option("file", ana_file, "Model XML file")->required();
    ana->add_flag("--paths", ana_paths, "Also enumerate start-to-stop paths");

    std::string cal_file, cal_out;
    double cal_measured = 0.0;
    auto* cal = app.add_subcommand("calibrate", "Scale delays to match a measured mean");
    cal->add_option("file", cal_file, "Model XML file")->required();
    cal->add_option("--measured-mean", cal_measured, "Measured mean service time, ms")->required();
    cal->add_option("--out", cal_out, "Where to write the scaled model")->required();

    std::string gen_file, gen_out, gen_template = "fig4";
    auto* gen = app.add_subcommand("generate", "Render the simulation script for a model");
    gen->add_option("file", gen_file, "Model XML file")->required();
    gen->add_option("--template", gen_template, "Built-in template name or template file path")
        ->capture_default_str();
    gen->add_option("--out", gen_out, "Write the script here instead of stdout");

    std::string rep_file, rep_out;
    std::uint64_t rep_window = 50;
    auto* rep = app.add_subcommand("report", "Turn a runs CSV into a trend CSV");
    rep->add_option("csv", rep_file, "Per-run CSV written by simulate --out")->required();
    rep->add_option("--window", rep_window, "Moving-average window")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    rep->add_option("--out", rep_out, "Write the trend CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e); // prints help or the flag error
        return rc == 0 ? 0 : 2;
    }

    try {
        if (val->parsed()) return cmd_validate(val_file);

        if (sim->parsed()) {
            StsModel model = load_model(sim_file);
            SimulationConfig cfg;
            cfg.runs = sim_runs;
            cfg.seed = sim_seed;
            cfg.max_steps = sim_max_steps;
            cfg.measure = sim_measure == "response" ? Measure::Response : Measure::Service;
            SimulationResult result = simulate(model, cfg, thread_count());
            if (!sim_out.empty()) write_file(sim_out, write_runs_csv(result.records));
            print_summary(result.summary);
            return 0;
        }

        if (ana->parsed()) {
            StsModel model = load_model(ana_file);
            MomentReport moments = expected_moments(model);
            std::cout << "mean_ms=" << format_sig6(moments.mean) << '\n'
                      << "std_ms=" << format_sig6(moments.std) << '\n'
                      << "variance_ms2=" << format_sig6(moments.variance) << '\n'
                      << "second_moment_ms2=" << format_sig6(moments.second_moment) << '\n';
            if (ana_paths) {
                PathEnumeration pe = enumerate_paths(model);
                std::cout << "paths=" << pe.paths.size() << '\n'
                          << "aggregate_mean_ms=" << format_sig6(pe.aggregate_mean) << '\n'
                          << "support_min_ms=" << format_sig6(pe.support_min) << '\n'
                          << "support_max_ms=" << format_sig6(pe.support_max) << '\n';
                for (std::size_t i = 0; i < pe.paths.size(); ++i) {
                    const PathInfo& p = pe.paths[i];
                    std::cout << "path_" << i + 1 << ": probability=" << format_sig6(p.probability)
                              << " mean_ms=" << format_sig6(p.mean)
                              << " min_ms=" << format_sig6(p.min)
                              << " max_ms=" << format_sig6(p.max) << " states=";
                    for (std::size_t j = 0; j < p.states.size(); ++j) {
                        if (j) std::cout << "->";
                        std::cout << p.states[j];
                    }
                    std::cout << '\n';
                }
            }
            return 0;
        }

        if (cal->parsed()) {
            StsModel model = load_model(cal_file);
            MomentReport before = expected_moments(model);
            StsModel scaled = calibrate(model, cal_measured);
            write_file(cal_out, serialize_model(scaled));
            MomentReport after = expected_moments(scaled);
            std::cout << "analytic_mean_ms=" << format_sig6(before.mean) << '\n'
                      << "scale=" << format_sig6(cal_measured / before.mean) << '\n'
                      << "calibrated_mean_ms=" << format_sig6(after.mean) << '\n';
            return 0;
        }

        if (gen->parsed()) {
            StsModel model = load_model(gen_file);
            SimProgram ir = build_ir(model);
            std::string text = render(ir, gen_template);
            if (gen_out.empty())
                std::cout << text;
            else
                write_file(gen_out, text);
            return 0;
        }

        if (rep->parsed()) {
            std::vector<RunRecord> records = read_runs_csv(read_file(rep_file));
            std::string text = emit_trend_csv(records, rep_window);
            if (rep_out.empty())
                std::cout << text;
            else
                write_file(rep_out, text);
            return 0;
        }
    } catch (const CliExit& e) {
        return e.code;
    } catch (const StsError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace stsperf
