#ifndef GPP_PROJECTION_HPP
#define GPP_PROJECTION_HPP

#include <optional>
#include <string>
#include <vector>

#include "gpp/abstraction.hpp"
#include "gpp/features.hpp"

/*
  The numerical projection of a generalized problem: state variables are
  the features, actions are abstract actions, and init/goal are DNF
  formulas over the atoms p and n=0. Booleanization turns it into a FOND
  problem where n-down becomes the two-outcome effect n>0 | n=0 and n-up a
  deterministic n>0.
*/

namespace gpp {

struct Formula {
    // DNF: list of terms, each a conjunction of literals
    std::vector<std::vector<AbstractLiteral>> terms;

    bool satisfied_by(const BooleanValuation &v, const FeatureSet &fs) const;
    std::string str() const;
};

struct VarDecl {
    std::string name;
    FeatureKind kind;
};

struct QnpProblem {
    std::string name;
    std::vector<VarDecl> vars;
    Formula init;
    Formula goal;
    std::vector<AbstractAction> actions;

    int var_index(const std::string &name) const;
    const AbstractAction *action(const std::string &name) const;
    // view of the variables as a (evaluator-free) feature set, so the
    // valuation helpers can be shared
    FeatureSet var_view() const;
};

// Assembles the tuple and checks that formulas and actions only mention
// declared variables. Throws Error on unknown-feature references.
QnpProblem build_projection(const std::string &name, const std::vector<VarDecl> &vars,
                            const std::vector<AbstractAction> &actions,
                            const Formula &init, const Formula &goal);

// Interface soundness over a family: (a) the initial state of every
// instance satisfies init, (b) every reachable state satisfying goal is a
// goal state of its instance.
Verdict verify_interface_soundness(const Formula &init, const Formula &goal,
                                   const Family &family, const FeatureSet &fs,
                                   size_t cap = DEFAULT_REACHABILITY_CAP);

struct FondAction {
    std::string name;
    std::vector<AbstractLiteral> pre;  // over props; numeric props use =0/>0
    // one outcome for deterministic actions, two when a decrement was
    // translated (first outcome keeps n>0, second reaches n=0)
    std::vector<std::vector<AbstractLiteral>> outcomes;
    std::optional<std::string> dec_feature;
    std::vector<std::string> inc_features;
};

struct FondProblem {
    std::string name;
    std::vector<VarDecl> props;  // numeric entries stand for the symbol n=0
    Formula init;
    Formula goal;
    std::vector<FondAction> actions;

    int prop_index(const std::string &name) const;
    FeatureSet prop_view() const;
};

FondProblem booleanize(const QnpProblem &qnp);

struct QplusResult {
    bool identity;
    std::string evidence;
};

// Identity when, per numerical variable, either nothing increments it or
// every incrementing action has an outcome that entails a goal term; the
// planner's termination check covers the remaining cases.
QplusResult check_qplus_condition(const QnpProblem &qnp);

// Rewrites a multi-term goal into a single auxiliary goal atom achieved by
// one action per term; multi-term inits stay as multiple initial states,
// which the planner handles directly. Single-term formulas pass through.
FondProblem compile_dnf(const FondProblem &fond);

// All bounded successors of applying the action at a feature valuation:
// increments add 1..delta_cap, decrements subtract 1..min(delta_cap, n).
// Throws Error if the precondition fails.
std::vector<FeatureValuation> qnp_successors(const QnpProblem &qnp,
                                             const FeatureValuation &s,
                                             const AbstractAction &action,
                                             int delta_cap = 3);

QnpProblem parse_qnp(const std::string &text);
std::string print_qnp(const QnpProblem &qnp);
FondProblem parse_fond(const std::string &text);
std::string print_fond(const FondProblem &fond);

}  // namespace gpp

#endif
