#ifndef GPP_FOND_PLANNER_HPP
#define GPP_FOND_PLANNER_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gpp/projection.hpp"

/*
  Strong-cyclic policy synthesis over boolean FOND problems, plus the
  termination sieve that upgrades strong-cyclic solutions to qualitative
  ones (all conditionally fair runs reach the goal).

  The state space is enumerated explicitly: states are bitmasks over the
  propositions, one bit per symbol, true meaning p respectively n>0. The
  planner is deterministic: states are swept in ascending mask order and
  actions in declaration order, so equal inputs give byte-identical
  policies.
*/

namespace gpp {

using FondState = uint32_t;

struct PolicyEntry {
    FondState state;
    int action;  // index into FondProblem::actions
};

struct PlannerStats {
    size_t states_total = 0;
    size_t states_covered = 0;
    size_t prune_iterations = 0;
    size_t attempts = 1;  // qualitative retries
    double wall_ms = 0.0;
};

struct PolicyTable {
    std::vector<PolicyEntry> entries;  // emission order: BFS from the inits
    std::string problem_hash;
    PlannerStats stats;

    std::optional<int> action_at(FondState state) const;
    size_t size() const { return entries.size(); }
};

struct PolicyGraph {
    struct Edge {
        int from;         // index into nodes
        int action;       // FondProblem action index
        int outcome;      // outcome index within the action
        int to;           // index into nodes, -1 when the outcome is a goal
        int dec_prop;     // prop index decremented by this action, -1 if none
        uint32_t inc_mask;  // prop indices incremented
    };
    std::vector<FondState> nodes;  // the policy's states
    std::vector<Edge> edges;
};

struct Lasso {
    std::vector<FondState> prefix;                       // from an init state
    std::vector<std::pair<FondState, int>> cycle;        // (state, action)
};

struct TerminationResult {
    bool terminating = false;
    // one line per sieve step: which decrements were deleted in which SCC
    std::vector<std::string> certificate;
    std::optional<Lasso> lasso;
};

struct SolveResult {
    std::optional<PolicyTable> policy;
    // when unsolvable: initial states with no goal-connected action
    std::vector<FondState> core;
    PlannerStats stats;
};

SolveResult strong_cyclic_solve(
    const FondProblem &fond,
    const std::set<std::pair<FondState, int>> &excluded = {});

PolicyGraph build_policy_graph(const PolicyTable &policy, const FondProblem &fond);

TerminationResult check_termination(const PolicyTable &policy,
                                    const FondProblem &fond);

struct QualitativeResult {
    std::optional<PolicyTable> policy;
    TerminationResult termination;  // of the returned or last rejected policy
    std::vector<FondState> core;
    PlannerStats stats;
};

// Iterates over strong-cyclic solutions, forbidding one state-action pair
// from the detected lasso after each rejection, until a terminating policy
// is found or the space is exhausted.
QualitativeResult qualitative_solve(const FondProblem &fond);

bool fond_goal_satisfied(const FondProblem &fond, FondState state);
bool fond_pre_satisfied(const FondAction &action, const FondProblem &fond,
                        FondState state);
FondState fond_apply(const FondProblem &fond, FondState state,
                     const FondAction &action, size_t outcome);
std::vector<FondState> fond_init_states(const FondProblem &fond);

std::string state_str(FondState state, const FondProblem &fond);
std::string print_policy(const PolicyTable &policy, const FondProblem &fond);
PolicyTable parse_policy(const std::string &text, const FondProblem &fond);

uint64_t fnv1a(const std::string &data);

}  // namespace gpp

#endif
