#include "gpp/demos.hpp"

#include <chrono>
#include <sstream>

#include "gpp/generators.hpp"

namespace gpp {

DemoOptions::DemoOptions() : data_dir(GPP_DATA_DIR) {}

namespace {

std::vector<DemoSpec> make_specs() {
    std::vector<DemoSpec> specs;
    specs.push_back({"qclear",
                     "qclear.features",
                     "qclear.qnp",
                     "qclear_le4",
                     {{"qclear_le4", {"first", "random:1", "adversarial"}, 2},
                      {"qclear_5_7", {"first", "random:1"}, 2}}});
    specs.push_back({"qmove",
                     "qmove.features",
                     "qmove.qnp",
                     "qmove_le6",
                     {{"qmove_le6", {"first", "random:1", "adversarial"}, 2}}});
    specs.push_back({"qslide",
                     "qslide.features",
                     "qslide.qnp",
                     "qslide_s3",
                     {{"qslide_s500", {"first", "random:1"}, 2},
                      {"qslide_s3", {"adversarial"}, 1}}});
    specs.push_back({"qon",
                     "qon.features",
                     "qon.qnp",
                     "qon_le5",
                     {{"qon_le5", {"first", "random:1", "adversarial"}, 2}}});
    specs.push_back({"qtower",
                     "qtower.features",
                     "qtower.qnp",
                     "qtower_le5",
                     {{"qtower_le5", {"first", "random:1", "adversarial"}, 2}},
                     true});
    specs.push_back({"qtower_bottom",
                     "qtower.features",
                     "qtower_bottom.qnp",
                     "qtower_le5",
                     {{"qtower_le5", {"first", "random:1", "adversarial"}, 2}},
                     true});
    return specs;
}

}  // namespace

const std::vector<DemoSpec> &demo_specs() {
    static const std::vector<DemoSpec> specs = make_specs();
    return specs;
}

const DemoSpec &demo_spec(const std::string &name) {
    for (const DemoSpec &spec : demo_specs())
        if (spec.name == name)
            return spec;
    throw Error("unknown demo '" + name + "'");
}

std::vector<std::string> demo_names() {
    std::vector<std::string> names;
    for (const DemoSpec &spec : demo_specs())
        names.push_back(spec.name);
    return names;
}

int DemoResult::exit_code() const {
    bool solved = policy.has_value() && termination.terminating;
    return solved && execution.all_succeeded() ? 0 : 1;
}

bool DemoResult::all_verdicts_verified() const {
    for (const auto &[name, verdict] : soundness)
        if (verdict.status != Verdict::verified)
            return false;
    return interface_verdict.status == Verdict::verified;
}

DemoResult run_demo(const std::string &name, const DemoOptions &options) {
    auto t0 = std::chrono::steady_clock::now();
    const DemoSpec &spec = demo_spec(name);
    DemoResult result;
    result.name = name;

    std::string features_path = options.data_dir + "/" + spec.features_file;
    std::string qnp_path = options.data_dir + "/" + spec.qnp_file;
    std::string features_text = read_file(features_path);
    std::string qnp_text = read_file(qnp_path);
    result.fs = parse_feature_file(features_text);
    result.qnp = parse_qnp(qnp_text);

    // the projection's variables and the evaluators must line up by name;
    // evaluation follows the projection's declaration order throughout
    FeatureSet aligned;
    aligned.goal_pattern = result.fs.goal_pattern;
    for (const VarDecl &var : result.qnp.vars) {
        int idx = result.fs.index_of(var.name);
        if (idx < 0)
            throw Error("demo " + name + ": variable '" + var.name +
                        "' has no feature evaluator");
        if (result.fs.features[idx].kind != var.kind)
            throw Error("demo " + name + ": kind mismatch on '" + var.name + "'");
        aligned.features.push_back(result.fs.features[idx]);
    }
    result.fs = aligned;

    Report &report = result.report;
    report.add("run");
    report.line("command: demo " + name);
    report.add("inputs");
    report.line("features: " + spec.features_file + " fnv1a=" +
                hash_hex(features_text));
    report.line("problem: " + spec.qnp_file + " fnv1a=" + hash_hex(qnp_text));
    report.line("verify_family: " + spec.verify_family);
    report.line("cap: " + std::to_string(options.cap));

    report.add("validate");
    for (const AbstractAction &action : result.qnp.actions) {
        std::vector<std::string> violations =
            validate_abstract_action(action, result.fs);
        if (violations.empty()) {
            report.line("ok: " + action.name);
        } else {
            for (const std::string &violation : violations) {
                report.line("violation: " + violation);
                result.validation_violations.push_back(violation);
            }
        }
    }

    Family verify_family = build_family(spec.verify_family);
    report.add("soundness");
    for (const AbstractAction &action : result.qnp.actions) {
        Verdict verdict =
            check_soundness(action, verify_family, result.fs, options.cap);
        report.line(action.name + ": " + verdict.status_str() + " (instances=" +
                    std::to_string(verdict.instances_checked) + " states=" +
                    std::to_string(verdict.states_checked) + ")");
        for (const Witness &witness : verdict.witnesses)
            report.line("  witness: " + witness.str());
        result.soundness.push_back({action.name, verdict});
    }

    result.interface_verdict = verify_interface_soundness(
        result.qnp.init, result.qnp.goal, verify_family, result.fs, options.cap);
    report.add("interface");
    report.line("status: " + result.interface_verdict.status_str());
    for (const Witness &witness : result.interface_verdict.witnesses)
        report.line("  witness: " + witness.str());

    result.qplus = check_qplus_condition(result.qnp);
    report.add("qplus");
    report.line(std::string("status: ") +
                (result.qplus.identity ? "identity" : "needs-translation"));
    report.line("evidence: " + result.qplus.evidence);

    result.fond = booleanize(result.qnp);
    QualitativeResult solved = qualitative_solve(result.fond);
    report.add("planner");
    report.line("states: " + std::to_string(solved.stats.states_total));
    report.line("covered: " + std::to_string(solved.stats.states_covered));
    report.line("prune_iterations: " +
                std::to_string(solved.stats.prune_iterations));
    report.line("attempts: " + std::to_string(solved.stats.attempts));
    if (!solved.policy) {
        report.line("status: unsolvable");
        report.add("core");
        for (FondState s : solved.core)
            report.line(state_str(s, result.fond));
        return result;
    }
    result.policy = solved.policy;
    result.termination = solved.termination;
    result.policy_text = print_policy(*result.policy, result.fond);
    report.line("status: solved");
    report.line("policy_hash: " + result.policy->problem_hash);

    report.add("policy");
    {
        std::istringstream lines(result.policy_text);
        std::string line;
        while (std::getline(lines, line))
            report.line(line);
    }

    report.add("termination");
    report.line(std::string("status: ") + (result.termination.terminating
                                               ? "terminating"
                                               : "nonterminating"));
    for (const std::string &step : result.termination.certificate)
        report.line("certificate: " + step);

    report.add("execution");
    for (const ExecBlock &block : spec.exec_blocks) {
        Family family = build_family(block.family);
        std::vector<Strategy> strategies;
        for (const std::string &text : block.strategies)
            strategies.push_back(Strategy::parse(text));
        ExecutionReport exec =
            verify_generalized(*result.policy, result.fond, result.qnp, result.fs,
                               family, strategies, block.trials, options.step_cap);
        std::string strategy_list;
        for (const std::string &s : block.strategies)
            strategy_list += (strategy_list.empty() ? "" : ",") + s;
        report.line("family: " + block.family + " strategies=" + strategy_list +
                    " runs=" + std::to_string(exec.runs) + " successes=" +
                    std::to_string(exec.successes));
        for (const RunRecord &failure : exec.failures)
            report.line("  failure: instance=" + failure.instance + " strategy=" +
                        failure.strategy + " outcome=" +
                        Trajectory::outcome_str(failure.outcome));
        result.execution.runs += exec.runs;
        result.execution.successes += exec.successes;
        for (const RunRecord &failure : exec.failures)
            result.execution.failures.push_back(failure);
    }

    auto t1 = std::chrono::steady_clock::now();
    result.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    report.add("outcome");
    report.line("exit: " + std::to_string(result.exit_code()));
    if (options.timings) {
        report.add("timings");
        report.line("wall_ms: " + std::to_string(result.wall_ms));
    }
    return result;
}

}  // namespace gpp
