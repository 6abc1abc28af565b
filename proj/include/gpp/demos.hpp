#ifndef GPP_DEMOS_HPP
#define GPP_DEMOS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gpp/abstraction.hpp"
#include "gpp/executor.hpp"
#include "gpp/fond_planner.hpp"
#include "gpp/projection.hpp"
#include "gpp/report.hpp"

/*
  The bundled examples, wired end to end: load features and projection,
  validate the abstract actions, check soundness and the init/goal
  interface over a desk-scale family, synthesize a terminating policy, and
  execute it across the family under several strategies. Each demo's
  feature set, projection and instance families ship with the toolkit.
*/

namespace gpp {

struct ExecBlock {
    std::string family;
    std::vector<std::string> strategies;
    uint64_t trials = 1;
};

struct DemoSpec {
    std::string name;
    std::string features_file;
    std::string qnp_file;
    std::string verify_family;
    std::vector<ExecBlock> exec_blocks;
    // explicit goal-parameter binding note for families whose instances
    // carry no goal atoms (tower building)
    bool binds_explicitly = false;
};

struct DemoOptions {
    std::string data_dir;  // defaults to the bundled data directory
    size_t cap = DEFAULT_REACHABILITY_CAP;
    int delta_cap = 3;
    size_t step_cap = DEFAULT_STEP_CAP;
    bool timings = false;

    DemoOptions();
};

struct DemoResult {
    std::string name;
    FeatureSet fs;
    QnpProblem qnp;
    FondProblem fond;
    std::vector<std::string> validation_violations;
    std::vector<std::pair<std::string, Verdict>> soundness;
    Verdict interface_verdict;
    QplusResult qplus{true, ""};
    std::optional<PolicyTable> policy;
    TerminationResult termination;
    ExecutionReport execution;
    Report report;
    std::string policy_text;
    double wall_ms = 0.0;

    int exit_code() const;
    bool all_verdicts_verified() const;
};

const std::vector<DemoSpec> &demo_specs();
const DemoSpec &demo_spec(const std::string &name);
std::vector<std::string> demo_names();

DemoResult run_demo(const std::string &name, const DemoOptions &options = {});

}  // namespace gpp

#endif
