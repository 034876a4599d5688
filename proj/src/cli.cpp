#include "mlg/cli.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlg/driver.hpp"
#include "mlg/engine.hpp"
#include "mlg/explorer.hpp"
#include "mlg/pretty.hpp"

namespace mlg::cli {

namespace {

enum class Format { text, records };

struct Config {
    std::string input;
    std::uint64_t seed = 0;
    std::uint64_t max_steps = 100000;
    std::uint64_t depth = 32;
    std::uint64_t states = 100000;
    unsigned repl_budget = 2;
    Format format = Format::text;
    bool unchecked = false;
    bool no_prelude = false;
    bool no_repl = false;
    std::uint64_t block_size = 0;
    std::string dot;
};

void add_common(CLI::App& cmd, Config& cfg) {
    cmd.add_option("input", cfg.input, "Source file, or - for standard input")->required();
    cmd.add_option("--trace-format", cfg.format, "Trace and diagnostic format")
        ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"text", Format::text},
                                                                           {"records", Format::records}}));
    cmd.add_flag("--unchecked", cfg.unchecked, "Skip static checking");
    cmd.add_flag("--no-prelude", cfg.no_prelude, "Do not put the prelude in scope");
    cmd.add_flag("--no-repl", cfg.no_repl, "Reject programs that use replication");
    cmd.add_option("--block-size", cfg.block_size, "Override the prelude's blockSize")->check(CLI::PositiveNumber);
}

std::string display_name(const std::string& input) { return input == "-" ? "<stdin>" : input; }

bool read_input(const Config& cfg, std::istream& in, std::string& text, std::ostream& err) {
    if (cfg.input == "-") {
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
        return true;
    }
    std::ifstream file(cfg.input, std::ios::binary);
    if (!file) {
        err << "mlg: cannot open " << cfg.input << "\n";
        return false;
    }
    text.assign(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
    return true;
}

void report(const Diagnostic& d, const Config& cfg, std::ostream& err) {
    if (cfg.format == Format::text) {
        err << format_diagnostic(d, display_name(cfg.input)) << "\n";
        return;
    }
    nlohmann::ordered_json j;
    j["file"] = display_name(cfg.input);
    j["line"] = d.span.begin.line;
    j["col"] = d.span.begin.col;
    j["severity"] = std::string(to_string(d.severity));
    j["kind"] = std::string(to_string(d.kind));
    j["message"] = d.message;
    err << j.dump() << "\n";
}

std::string events(const std::vector<TraceEvent>& ev, Format f) {
    return f == Format::text ? trace_text(ev) : trace_records(ev);
}

int load(const Config& cfg, std::istream& in, std::ostream& err, bool check, Frontend& fe) {
    std::string text;
    if (!read_input(cfg, in, text, err)) return exit_usage;
    FrontendOptions opts;
    opts.use_prelude = !cfg.no_prelude;
    opts.check = check && !cfg.unchecked;
    opts.allow_replication = !cfg.no_repl;
    if (cfg.block_size) opts.block_size = Natural(cfg.block_size);
    fe = load_program(text, opts);
    for (const Diagnostic& d : fe.diagnostics) report(d, cfg, err);
    return fe.ok() ? exit_ok : exit_check_failed;
}

int cmd_check(const Config& cfg, std::istream& in, std::ostream& err) {
    Frontend fe;
    return load(cfg, in, err, true, fe);
}

int cmd_fmt(const Config& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
    Frontend fe;
    if (int rc = load(cfg, in, err, false, fe); rc != exit_ok) return rc;
    out << pretty(fe.user);
    return exit_ok;
}

int cmd_run(const Config& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
    Frontend fe;
    if (int rc = load(cfg, in, err, true, fe); rc != exit_ok) return rc;
    if (!fe.linked->system) {
        err << display_name(cfg.input) << ": error: program has no system entry\n";
        return exit_check_failed;
    }
    RunResult result = run(initial_configuration(*fe.linked, cfg.seed), cfg.max_steps);
    out << events(result.final.trace, cfg.format);
    switch (result.verdict) {
        case Verdict::terminated: return exit_ok;
        case Verdict::deadlock: return exit_deadlock;
        case Verdict::step_limit: return exit_step_limit;
        case Verdict::fault: report(*result.fault, cfg, err); return exit_check_failed;
    }
    return exit_check_failed;
}

int cmd_explore(const Config& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
    Frontend fe;
    if (int rc = load(cfg, in, err, true, fe); rc != exit_ok) return rc;
    if (!fe.linked->system) {
        err << display_name(cfg.input) << ": error: program has no system entry\n";
        return exit_check_failed;
    }
    ExploreLimits limits{cfg.depth, cfg.states, cfg.repl_budget};
    StateGraph graph = explore(initial_configuration(*fe.linked), limits);
    if (!cfg.dot.empty()) {
        std::ofstream dot(cfg.dot);
        if (!dot) {
            err << "mlg: cannot write " << cfg.dot << "\n";
            return exit_usage;
        }
        dot << to_dot(graph);
    }
    std::vector<DeadlockWitness> deadlocks = find_deadlocks(graph);
    out << "states " << graph.states.size() << ", edges " << graph.edges.size() << ", deadlocks "
        << deadlocks.size() << (graph.has_frontier() ? ", budget cut" : "") << "\n";
    for (const DeadlockWitness& w : deadlocks) {
        out << "deadlock s" << w.state << ", witness length " << w.path.size() << "\n";
        out << events(witness_events(graph, w), cfg.format);
    }
    if (!deadlocks.empty()) return exit_deadlock;
    if (graph.has_frontier()) {
        err << "mlg: exploration cut by budget; no deadlock found in the explored part\n";
        return exit_budget_cut;
    }
    return exit_ok;
}

}  // namespace

int run_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Checker, interpreter and state explorer for .mlg programs", "mlg"};
    app.require_subcommand(1);
    Config cfg;

    CLI::App* check = app.add_subcommand("check", "Parse and check a program");
    CLI::App* run_cmd = app.add_subcommand("run", "Run a program with the seeded scheduler");
    CLI::App* explore_cmd = app.add_subcommand("explore", "Explore every interleaving and report deadlocks");
    CLI::App* fmt = app.add_subcommand("fmt", "Pretty-print a program");
    for (CLI::App* cmd : {check, run_cmd, explore_cmd, fmt}) add_common(*cmd, cfg);
    run_cmd->add_option("--seed", cfg.seed, "Scheduler seed");
    run_cmd->add_option("--max-steps", cfg.max_steps, "Step limit")->check(CLI::PositiveNumber);
    explore_cmd->add_option("--depth", cfg.depth, "Maximum path length")->check(CLI::PositiveNumber);
    explore_cmd->add_option("--states", cfg.states, "Maximum number of states")->check(CLI::PositiveNumber);
    explore_cmd->add_option("--repl-budget", cfg.repl_budget, "Unfoldings per replication along a path")
        ->check(CLI::PositiveNumber);
    explore_cmd->add_option("--dot", cfg.dot, "Write the state graph in Graphviz format");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "mlg: " << e.what() << "\n" << "run 'mlg --help' for usage\n";
        return exit_usage;
    }

    try {
        if (check->parsed()) return cmd_check(cfg, in, err);
        if (fmt->parsed()) return cmd_fmt(cfg, in, out, err);
        if (run_cmd->parsed()) return cmd_run(cfg, in, out, err);
        return cmd_explore(cfg, in, out, err);
    } catch (const DiagnosticError& e) {
        report(e.diagnostic(), cfg, err);
        return exit_check_failed;
    }
}

}  // namespace mlg::cli
