#ifndef GPP_EXECUTOR_HPP
#define GPP_EXECUTOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gpp/fond_planner.hpp"
#include "gpp/projection.hpp"

/*
  Executes abstract policies on concrete instances. At every state the
  policy entry for the current boolean feature valuation is looked up; the
  abstract action is then instantiated as the set of applicable ground
  actions it represents and a strategy picks one. Empty instantiations end
  the trajectory (that is exactly what soundness rules out, so it must be
  observable), they never raise.
*/

namespace gpp {

struct Strategy {
    enum Kind { first, random, adversarial } kind = first;
    uint64_t seed = 0;

    std::string str() const;
    // "first", "random:<seed>" or "adversarial"
    static Strategy parse(const std::string &text);
};

std::vector<const GroundAction *> instantiate(const AbstractAction &abstract,
                                              const Instance &inst, const State &s,
                                              const FeatureSet &fs,
                                              const Binding &binding);

struct TrajectoryStep {
    State state;
    BooleanValuation valuation;
    std::string abstract_action;
    const GroundAction *ground;
};

struct Trajectory {
    enum Outcome { goal_reached, policy_undefined, inapplicable, step_cap };
    std::vector<TrajectoryStep> steps;
    State final_state;
    BooleanValuation final_valuation;
    Outcome outcome = goal_reached;

    static const char *outcome_str(Outcome outcome);
    std::string dump(const Instance &inst, const FeatureSet &fs) const;
};

// Ten times the default reachability cap; generous for desk-scale runs.
constexpr size_t DEFAULT_STEP_CAP = 10 * DEFAULT_REACHABILITY_CAP;

// The policy's actions are resolved by name against qnp's abstract actions;
// fond supplies the proposition order of the policy states. Instances
// without goal atoms run until the policy is exhausted (their families
// state success abstractly, via qnp's goal formula).
Trajectory run_policy(const PolicyTable &policy, const FondProblem &fond,
                      const QnpProblem &qnp, const FeatureSet &fs,
                      const Instance &inst, const Binding &binding,
                      const Strategy &strategy,
                      size_t step_cap = DEFAULT_STEP_CAP);

// Success for an instance with goal atoms is reaching them; for one
// without, ending policy-undefined in a state satisfying the abstract goal.
bool run_succeeded(const Trajectory &trajectory, const Instance &inst,
                   const QnpProblem &qnp, const FeatureSet &fs);

struct RunRecord {
    std::string instance;
    std::string strategy;
    uint64_t trial = 0;
    Trajectory::Outcome outcome;
    size_t steps = 0;
    bool success = false;
};

struct ExecutionReport {
    size_t runs = 0;
    size_t successes = 0;
    std::vector<RunRecord> failures;

    bool all_succeeded() const { return successes == runs; }
};

// Runs the policy over every family member under every strategy; random
// strategies are repeated `trials` times with derived seeds. Trajectories
// are also checked step by step against the boolean projection: every
// step must be a legal transition of the policy's action in fond (the
// feature-tracking property), and a violation counts as a failure.
ExecutionReport verify_generalized(const PolicyTable &policy,
                                   const FondProblem &fond, const QnpProblem &qnp,
                                   const FeatureSet &fs, const Family &family,
                                   const std::vector<Strategy> &strategies,
                                   uint64_t trials = 1,
                                   size_t step_cap = DEFAULT_STEP_CAP);

// True iff every step's valuation pair is a legal outcome of the chosen
// policy action in the boolean projection.
bool tracks_boolean_projection(const Trajectory &trajectory,
                               const PolicyTable &policy, const FondProblem &fond,
                               const FeatureSet &fs);

}  // namespace gpp

#endif
