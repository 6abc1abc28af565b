// Command-line front end: verification of abstract actions against ground
// instance families, projection and booleanization, policy synthesis, and
// policy execution. Exit codes: 0 verified/success, 1 refuted/unsolvable,
// 2 usage or input errors.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpp/demos.hpp"
#include "gpp/executor.hpp"
#include "gpp/fond_planner.hpp"
#include "gpp/generators.hpp"
#include "gpp/projection.hpp"
#include "gpp/report.hpp"

using namespace gpp;

namespace {

struct CommonArgs {
    std::string problem;
    std::string features;
    std::string family;
    std::string action;
    std::string policy_file;
    std::string instance_file;
    std::string out;
    std::string report_path;
    std::string out_dir = "out";
    std::string data_dir;
    std::vector<std::string> strategies;
    std::vector<std::string> binds;
    size_t cap = DEFAULT_REACHABILITY_CAP;
    int delta_cap = 3;
    size_t step_cap = DEFAULT_STEP_CAP;
    uint64_t trials = 1;
    bool trace = false;
    bool timings = false;
};

struct Loaded {
    FeatureSet fs;
    QnpProblem qnp;
};

Loaded load_problem(const CommonArgs &args) {
    Loaded loaded;
    loaded.qnp = parse_qnp(read_file(args.problem));
    if (args.features.empty())
        throw Error("--features is required for this command");
    FeatureSet raw = parse_feature_file(read_file(args.features));
    loaded.fs.goal_pattern = raw.goal_pattern;
    for (const VarDecl &var : loaded.qnp.vars) {
        int idx = raw.index_of(var.name);
        if (idx < 0)
            throw Error("variable '" + var.name + "' has no feature evaluator");
        loaded.fs.features.push_back(raw.features[idx]);
    }
    return loaded;
}

Binding resolve_binding(const CommonArgs &args, const FeatureSet &fs,
                        const Instance &inst) {
    if (!args.binds.empty()) {
        Binding binding;
        for (const std::string &pair : args.binds) {
            size_t eq = pair.find('=');
            if (eq == std::string::npos)
                throw Error("--bind expects name=object, got '" + pair + "'");
            binding.values[pair.substr(0, eq)] = pair.substr(eq + 1);
        }
        return binding;
    }
    if (!fs.goal_pattern.empty())
        return bind_goal_parameters(fs.goal_pattern, inst);
    return Binding{};
}

void emit_report(const CommonArgs &args, const Report &report) {
    if (!args.report_path.empty())
        write_file(args.report_path, report.str());
    std::cout << report.str();
}

int verdict_exit(const Verdict &verdict) {
    return verdict.status == Verdict::verified ? 0 : 1;
}

void report_verdict(Report &report, const std::string &name,
                    const Verdict &verdict) {
    report.line(name + ": " + verdict.status_str() + " (instances=" +
                std::to_string(verdict.instances_checked) + " states=" +
                std::to_string(verdict.states_checked) + ")");
    for (const Witness &witness : verdict.witnesses)
        report.line("  witness: " + witness.str());
}

int cmd_check_sound(const CommonArgs &args) {
    Loaded loaded = load_problem(args);
    Family family = build_family_glob(args.family);
    Report report;
    report.add("run");
    report.line("command: check-sound");
    report.add("soundness");
    int exit_code = 0;
    for (const AbstractAction &action : loaded.qnp.actions) {
        if (!args.action.empty() && action.name != args.action)
            continue;
        Verdict verdict = check_soundness(action, family, loaded.fs, args.cap);
        report_verdict(report, action.name, verdict);
        exit_code = std::max(exit_code, verdict_exit(verdict));
    }
    emit_report(args, report);
    return exit_code;
}

int cmd_check_complete(const CommonArgs &args) {
    Loaded loaded = load_problem(args);
    Family family = build_family_glob(args.family);
    Verdict verdict =
        check_completeness(loaded.qnp.actions, family, loaded.fs, args.cap);
    Report report;
    report.add("run");
    report.line("command: check-complete");
    report.add("completeness");
    report_verdict(report, loaded.qnp.name, verdict);
    emit_report(args, report);
    return verdict_exit(verdict);
}

int cmd_check_interface(const CommonArgs &args) {
    Loaded loaded = load_problem(args);
    Family family = build_family_glob(args.family);
    Verdict verdict = verify_interface_soundness(loaded.qnp.init, loaded.qnp.goal,
                                                 family, loaded.fs, args.cap);
    Report report;
    report.add("run");
    report.line("command: check-interface");
    report.add("interface");
    report_verdict(report, loaded.qnp.name, verdict);
    emit_report(args, report);
    return verdict_exit(verdict);
}

int cmd_project(const CommonArgs &args) {
    QnpProblem qnp = parse_qnp(read_file(args.problem));
    QplusResult qplus = check_qplus_condition(qnp);
    std::string text = print_qnp(qnp);
    if (!args.out.empty())
        write_file(args.out, text);
    else
        std::cout << text;
    std::cerr << "qplus: " << (qplus.identity ? "identity" : "needs-translation")
              << " (" << qplus.evidence << ")\n";
    return 0;
}

int cmd_booleanize(const CommonArgs &args) {
    QnpProblem qnp = parse_qnp(read_file(args.problem));
    FondProblem fond = booleanize(qnp);
    std::string text = print_fond(fond);
    if (!args.out.empty())
        write_file(args.out, text);
    else
        std::cout << text;
    return 0;
}

int cmd_solve(const CommonArgs &args) {
    QnpProblem qnp = parse_qnp(read_file(args.problem));
    FondProblem fond = booleanize(qnp);  // init/goal DNF handled natively
    auto t0 = std::chrono::steady_clock::now();
    QualitativeResult result = qualitative_solve(fond);
    auto t1 = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    std::cerr << "states expanded: " << result.stats.states_covered << "\n"
              << "iterations: " << result.stats.prune_iterations << "\n"
              << "attempts: " << result.stats.attempts << "\n"
              << "wall time: " << ms << " ms\n";
    if (!result.policy) {
        std::cerr << "unsolvable; disconnected initial states:\n";
        for (FondState s : result.core)
            std::cerr << "  " << state_str(s, fond) << "\n";
        return 1;
    }
    std::string text = print_policy(*result.policy, fond);
    if (!args.out.empty())
        write_file(args.out, text);
    else
        std::cout << text;
    return 0;
}

int cmd_run(const CommonArgs &args) {
    Loaded loaded = load_problem(args);
    FondProblem fond = booleanize(loaded.qnp);
    PolicyTable policy;
    if (!args.policy_file.empty()) {
        policy = parse_policy(read_file(args.policy_file), fond);
    } else {
        QualitativeResult result = qualitative_solve(fond);
        if (!result.policy) {
            std::cerr << "unsolvable projection\n";
            return 1;
        }
        policy = *result.policy;
    }
    Instance inst =
        parse_instance(read_file(args.instance_file), args.instance_file);
    Binding binding = resolve_binding(args, loaded.fs, inst);
    Strategy strategy = args.strategies.empty()
                            ? Strategy{}
                            : Strategy::parse(args.strategies.front());
    Trajectory trajectory = run_policy(policy, fond, loaded.qnp, loaded.fs, inst,
                                       binding, strategy, args.step_cap);
    if (args.trace)
        std::cout << trajectory.dump(inst, loaded.fs);
    else
        std::cout << "outcome: " << Trajectory::outcome_str(trajectory.outcome)
                  << "\n";
    return run_succeeded(trajectory, inst, loaded.qnp, loaded.fs) ? 0 : 1;
}

int cmd_verify(const CommonArgs &args) {
    Loaded loaded = load_problem(args);
    FondProblem fond = booleanize(loaded.qnp);
    PolicyTable policy;
    if (!args.policy_file.empty()) {
        policy = parse_policy(read_file(args.policy_file), fond);
    } else {
        QualitativeResult result = qualitative_solve(fond);
        if (!result.policy) {
            std::cerr << "unsolvable projection\n";
            return 1;
        }
        policy = *result.policy;
    }
    Family family = build_family_glob(args.family);
    std::vector<Strategy> strategies;
    for (const std::string &text : args.strategies)
        strategies.push_back(Strategy::parse(text));
    if (strategies.empty())
        strategies.push_back(Strategy{});
    ExecutionReport exec =
        verify_generalized(policy, fond, loaded.qnp, loaded.fs, family,
                           strategies, args.trials, args.step_cap);
    Report report;
    report.add("run");
    report.line("command: verify");
    report.add("execution");
    report.line("family: " + args.family);
    report.line("runs: " + std::to_string(exec.runs));
    report.line("successes: " + std::to_string(exec.successes));
    for (const RunRecord &failure : exec.failures)
        report.line("failure: instance=" + failure.instance + " strategy=" +
                    failure.strategy + " outcome=" +
                    Trajectory::outcome_str(failure.outcome));
    emit_report(args, report);
    return exec.all_succeeded() ? 0 : 1;
}

int cmd_demo(const CommonArgs &args, const std::string &name) {
    DemoOptions options;
    if (!args.data_dir.empty())
        options.data_dir = args.data_dir;
    options.cap = args.cap;
    options.delta_cap = args.delta_cap;
    options.step_cap = args.step_cap;
    options.timings = args.timings;
    DemoResult result = run_demo(name, options);

    std::string dir = args.out_dir + "/" + name;
    std::filesystem::create_directories(dir);
    write_file(dir + "/policy.txt", result.policy_text);
    write_file(dir + "/report.txt", result.report.str());
    if (!args.report_path.empty())
        write_file(args.report_path, result.report.str());
    std::cout << result.report.str();
    std::cerr << "wall time: " << result.wall_ms << " ms\n";
    std::cerr << "artifacts: " << dir << "/policy.txt, " << dir << "/report.txt\n";
    return result.exit_code();
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"generalized planning over feature abstractions"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string demo_name;

    auto add_common = [&](CLI::App *cmd, bool needs_family) {
        cmd->add_option("--cap", args.cap, "reachability cap");
        cmd->add_option("--delta-cap", args.delta_cap, "numeric update bound");
        cmd->add_option("--step-cap", args.step_cap, "execution step cap");
        cmd->add_option("--report", args.report_path, "write the report here");
        if (needs_family)
            cmd->add_option("--family", args.family, "instance family name")
                ->required();
    };

    CLI::App *check_sound =
        app.add_subcommand("check-sound", "abstract-action soundness over a family");
    check_sound->add_option("--problem", args.problem)->required();
    check_sound->add_option("--features", args.features)->required();
    check_sound->add_option("--action", args.action, "check one action only");
    add_common(check_sound, true);

    CLI::App *check_complete =
        app.add_subcommand("check-complete", "action-set completeness over a family");
    check_complete->add_option("--actions,--problem", args.problem,
                               "projection or action file")
        ->required();
    check_complete->add_option("--features", args.features)->required();
    add_common(check_complete, true);

    CLI::App *check_interface = app.add_subcommand(
        "check-interface", "init/goal formula soundness over a family");
    check_interface->add_option("--problem", args.problem)->required();
    check_interface->add_option("--features", args.features)->required();
    add_common(check_interface, true);

    CLI::App *project =
        app.add_subcommand("project", "validate and normalize a projection");
    project->add_option("--problem", args.problem)->required();
    project->add_option("--out", args.out);

    CLI::App *booleanize_cmd =
        app.add_subcommand("booleanize", "projection to boolean FOND problem");
    booleanize_cmd->add_option("--problem", args.problem)->required();
    booleanize_cmd->add_option("--out", args.out);

    CLI::App *solve =
        app.add_subcommand("solve", "synthesize a terminating strong-cyclic policy");
    solve->add_option("--problem", args.problem)->required();
    solve->add_option("--out", args.out);
    add_common(solve, false);

    CLI::App *run = app.add_subcommand("run", "execute a policy on one instance");
    run->add_option("--problem", args.problem)->required();
    run->add_option("--features", args.features)->required();
    run->add_option("--instance", args.instance_file)->required();
    run->add_option("--policy", args.policy_file, "policy file (else solve)");
    run->add_option("--strategy", args.strategies,
                    "first | random:<seed> | adversarial");
    run->add_option("--bind", args.binds, "goal parameter binding name=object");
    run->add_flag("--trace", args.trace, "print the trajectory");
    add_common(run, false);

    CLI::App *verify =
        app.add_subcommand("verify", "execute a policy across a family");
    verify->add_option("--problem", args.problem)->required();
    verify->add_option("--features", args.features)->required();
    verify->add_option("--policy", args.policy_file, "policy file (else solve)");
    verify->add_option("--strategy", args.strategies);
    verify->add_option("--trials", args.trials, "repeats for random strategies");
    add_common(verify, true);

    CLI::App *demo = app.add_subcommand("demo", "run a bundled example end to end");
    std::string names;
    for (const std::string &name : demo_names())
        names += (names.empty() ? "" : ", ") + name;
    demo->add_option("name", demo_name, "one of: " + names)->required();
    demo->add_option("--out-dir", args.out_dir, "artifact directory");
    demo->add_option("--data", args.data_dir, "data directory override");
    demo->add_flag("--timings", args.timings, "include wall times in the report");
    add_common(demo, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (check_sound->parsed())
            return cmd_check_sound(args);
        if (check_complete->parsed())
            return cmd_check_complete(args);
        if (check_interface->parsed())
            return cmd_check_interface(args);
        if (project->parsed())
            return cmd_project(args);
        if (booleanize_cmd->parsed())
            return cmd_booleanize(args);
        if (solve->parsed())
            return cmd_solve(args);
        if (run->parsed())
            return cmd_run(args);
        if (verify->parsed())
            return cmd_verify(args);
        if (demo->parsed())
            return cmd_demo(args, demo_name);
    } catch (const ParseError &e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
