#include "gpp/executor.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>

namespace gpp {

std::string Strategy::str() const {
    switch (kind) {
    case first:
        return "first";
    case random:
        return "random:" + std::to_string(seed);
    case adversarial:
        return "adversarial";
    }
    return "?";
}

Strategy Strategy::parse(const std::string &text) {
    Strategy s;
    if (text == "first") {
        s.kind = first;
    } else if (text == "adversarial") {
        s.kind = adversarial;
    } else if (text.rfind("random:", 0) == 0) {
        s.kind = random;
        s.seed = std::stoull(text.substr(7));
    } else if (text == "random") {
        s.kind = random;
    } else {
        throw Error("unknown strategy '" + text + "'");
    }
    return s;
}

std::vector<const GroundAction *> instantiate(const AbstractAction &abstract,
                                              const Instance &inst, const State &s,
                                              const FeatureSet &fs,
                                              const Binding &binding) {
    std::vector<const GroundAction *> out;
    for (const GroundAction &ga : inst.actions()) {
        if (!s.contains_all(ga.pre))
            continue;
        if (represents(abstract, ga, inst, s, fs, binding))
            out.push_back(&ga);
    }
    return out;
}

const char *Trajectory::outcome_str(Outcome outcome) {
    switch (outcome) {
    case goal_reached:
        return "goal-reached";
    case policy_undefined:
        return "policy-undefined";
    case inapplicable:
        return "inapplicable";
    case step_cap:
        return "step-cap";
    }
    return "?";
}

std::string Trajectory::dump(const Instance &inst, const FeatureSet &fs) const {
    (void)inst;
    std::ostringstream out;
    for (size_t i = 0; i < steps.size(); ++i)
        out << "step " << i << ": " << valuation_str(steps[i].valuation, fs)
            << " | " << steps[i].abstract_action << " -> "
            << steps[i].ground->str() << "\n";
    out << "outcome: " << outcome_str(outcome) << "\n";
    return out.str();
}

namespace {

// exact goal distances over the reachable fragment, for the adversarial
// strategy (desk scale only)
struct DistanceOracle {
    std::unordered_map<State, int64_t, StateHash> distance;

    DistanceOracle(const Instance &inst, const QnpProblem &qnp,
                   const FeatureSet &fs, const Binding &binding) {
        ReachableSet reachable = reachable_states(inst);
        std::unordered_map<State, size_t, StateHash> index;
        for (size_t i = 0; i < reachable.states.size(); ++i)
            index[reachable.states[i]] = i;
        std::vector<std::vector<size_t>> predecessors(reachable.states.size());
        std::deque<size_t> queue;
        std::vector<int64_t> dist(reachable.states.size(), -1);
        for (size_t i = 0; i < reachable.states.size(); ++i) {
            const State &s = reachable.states[i];
            for (const GroundAction &a : inst.actions()) {
                if (!s.contains_all(a.pre))
                    continue;
                State next = s;
                next.remove_all(a.del);
                next.add_all(a.add);
                auto it = index.find(next);
                if (it != index.end())
                    predecessors[it->second].push_back(i);
            }
            bool is_goal_state =
                inst.has_goal()
                    ? inst.is_goal(s)
                    : qnp.goal.satisfied_by(boolean_valuation(fs, inst, s, binding),
                                            fs);
            if (is_goal_state) {
                dist[i] = 0;
                queue.push_back(i);
            }
        }
        while (!queue.empty()) {
            size_t i = queue.front();
            queue.pop_front();
            for (size_t p : predecessors[i])
                if (dist[p] < 0) {
                    dist[p] = dist[i] + 1;
                    queue.push_back(p);
                }
        }
        for (size_t i = 0; i < reachable.states.size(); ++i)
            distance[reachable.states[i]] = dist[i];
    }

    // unreachable goals count as infinitely far
    int64_t of(const State &s) const {
        auto it = distance.find(s);
        if (it == distance.end() || it->second < 0)
            return INT64_MAX;
        return it->second;
    }
};

}  // namespace

Trajectory run_policy(const PolicyTable &policy, const FondProblem &fond,
                      const QnpProblem &qnp, const FeatureSet &fs,
                      const Instance &inst, const Binding &binding,
                      const Strategy &strategy, size_t step_cap) {
    if (step_cap < 1)
        throw Error("step cap must be >= 1");

    // feature order of fs may differ from fond's proposition order
    std::vector<int> prop_of(fs.size());
    for (size_t i = 0; i < fs.size(); ++i) {
        prop_of[i] = fond.prop_index(fs.features[i].name);
        if (prop_of[i] < 0)
            throw Error("feature '" + fs.features[i].name +
                        "' is not a proposition of the policy's problem");
    }
    auto to_fond_state = [&](const BooleanValuation &v) {
        FondState state = 0;
        for (size_t i = 0; i < v.positive.size(); ++i)
            if (v.positive[i])
                state |= FondState(1) << prop_of[i];
        return state;
    };

    std::mt19937_64 rng(strategy.seed);
    std::optional<DistanceOracle> oracle;
    if (strategy.kind == Strategy::adversarial)
        oracle.emplace(inst, qnp, fs, binding);

    Trajectory trajectory;
    State state = inst.init();
    for (size_t step = 0; step < step_cap; ++step) {
        BooleanValuation v = boolean_valuation(fs, inst, state, binding);
        if (inst.has_goal() && inst.is_goal(state)) {
            trajectory.outcome = Trajectory::goal_reached;
            trajectory.final_state = state;
            trajectory.final_valuation = v;
            return trajectory;
        }
        std::optional<int> choice = policy.action_at(to_fond_state(v));
        if (!choice) {
            trajectory.outcome = Trajectory::policy_undefined;
            trajectory.final_state = state;
            trajectory.final_valuation = v;
            return trajectory;
        }
        const std::string &name = fond.actions.at(*choice).name;
        const AbstractAction *abstract = qnp.action(name);
        if (!abstract)
            throw Error("policy action '" + name + "' missing from the projection");
        std::vector<const GroundAction *> candidates =
            instantiate(*abstract, inst, state, fs, binding);
        if (candidates.empty()) {
            trajectory.outcome = Trajectory::inapplicable;
            trajectory.final_state = state;
            trajectory.final_valuation = v;
            return trajectory;
        }
        const GroundAction *picked = candidates.front();
        if (strategy.kind == Strategy::random) {
            picked = candidates[rng() % candidates.size()];
        } else if (strategy.kind == Strategy::adversarial) {
            int64_t worst = -1;
            for (const GroundAction *candidate : candidates) {
                State next = state;
                next.remove_all(candidate->del);
                next.add_all(candidate->add);
                int64_t d = oracle->of(next);
                if (d > worst) {
                    worst = d;
                    picked = candidate;
                }
            }
        }
        trajectory.steps.push_back({state, v, name, picked});
        state = apply(inst, state, *picked);
    }
    trajectory.outcome = inst.has_goal() && inst.is_goal(state)
                             ? Trajectory::goal_reached
                             : Trajectory::step_cap;
    trajectory.final_state = state;
    trajectory.final_valuation = boolean_valuation(fs, inst, state, binding);
    return trajectory;
}

bool run_succeeded(const Trajectory &trajectory, const Instance &inst,
                   const QnpProblem &qnp, const FeatureSet &fs) {
    if (inst.has_goal())
        return trajectory.outcome == Trajectory::goal_reached;
    return trajectory.outcome == Trajectory::policy_undefined &&
           qnp.goal.satisfied_by(trajectory.final_valuation, fs);
}

bool tracks_boolean_projection(const Trajectory &trajectory,
                               const PolicyTable &policy, const FondProblem &fond,
                               const FeatureSet &fs) {
    (void)policy;
    auto bits_of = [&](const BooleanValuation &v) {
        FondState state = 0;
        for (size_t i = 0; i < v.positive.size(); ++i)
            if (v.positive[i])
                state |= FondState(1) << fond.prop_index(fs.features[i].name);
        return state;
    };
    for (size_t i = 0; i < trajectory.steps.size(); ++i) {
        FondState from = bits_of(trajectory.steps[i].valuation);
        FondState to = bits_of(i + 1 < trajectory.steps.size()
                                   ? trajectory.steps[i + 1].valuation
                                   : trajectory.final_valuation);
        const FondAction *action = nullptr;
        for (const FondAction &a : fond.actions)
            if (a.name == trajectory.steps[i].abstract_action)
                action = &a;
        if (!action || !fond_pre_satisfied(*action, fond, from))
            return false;
        bool matched = false;
        for (size_t o = 0; o < action->outcomes.size(); ++o)
            if (fond_apply(fond, from, *action, o) == to)
                matched = true;
        if (!matched)
            return false;
    }
    return true;
}

ExecutionReport verify_generalized(const PolicyTable &policy,
                                   const FondProblem &fond, const QnpProblem &qnp,
                                   const FeatureSet &fs, const Family &family,
                                   const std::vector<Strategy> &strategies,
                                   uint64_t trials, size_t step_cap) {
    ExecutionReport report;
    for (const FamilyMember &member : family.members) {
        Binding binding = binding_from_pairs(member.binding);
        for (const Strategy &strategy : strategies) {
            uint64_t repeats = strategy.kind == Strategy::random ? trials : 1;
            for (uint64_t trial = 0; trial < repeats; ++trial) {
                Strategy seeded = strategy;
                if (strategy.kind == Strategy::random)
                    seeded.seed = strategy.seed + trial;
                Trajectory trajectory =
                    run_policy(policy, fond, qnp, fs, member.instance, binding,
                               seeded, step_cap);
                bool ok = run_succeeded(trajectory, member.instance, qnp, fs) &&
                          tracks_boolean_projection(trajectory, policy, fond, fs);
                ++report.runs;
                if (ok) {
                    ++report.successes;
                } else {
                    report.failures.push_back({member.instance.name(),
                                               seeded.str(), trial,
                                               trajectory.outcome,
                                               trajectory.steps.size(), false});
                }
            }
        }
    }
    return report;
}

}  // namespace gpp
