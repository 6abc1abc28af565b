#include "gpp/fond_planner.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <functional>
#include <sstream>

#include "gpp/lexer.hpp"

namespace gpp {

uint64_t fnv1a(const std::string &data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

struct MaskTest {
    uint32_t mask = 0;   // constrained bits
    uint32_t value = 0;  // required values on those bits

    bool holds(FondState s) const { return (s & mask) == value; }
};

MaskTest compile_literals(const std::vector<AbstractLiteral> &literals,
                          const FondProblem &fond) {
    MaskTest test;
    for (const AbstractLiteral &lit : literals) {
        int idx = fond.prop_index(lit.feature);
        if (idx < 0)
            throw Error("unknown proposition '" + lit.feature + "'");
        uint32_t bit = uint32_t(1) << idx;
        test.mask |= bit;
        if (lit.form == LitForm::PosBool || lit.form == LitForm::Positive)
            test.value |= bit;
    }
    return test;
}

struct CompiledOutcome {
    uint32_t set = 0;
    uint32_t clear = 0;

    FondState apply(FondState s) const { return (s & ~clear) | set; }
};

struct CompiledAction {
    MaskTest pre;
    std::vector<CompiledOutcome> outcomes;
    int dec_prop = -1;
    uint32_t inc_mask = 0;
};

struct CompiledFond {
    const FondProblem *problem;
    size_t num_props;
    std::vector<MaskTest> goal_terms;
    std::vector<CompiledAction> actions;
    std::vector<FondState> init_states;

    bool is_goal(FondState s) const {
        for (const MaskTest &term : goal_terms)
            if (term.holds(s))
                return true;
        return false;
    }
};

CompiledFond compile(const FondProblem &fond) {
    CompiledFond c;
    c.problem = &fond;
    c.num_props = fond.props.size();
    if (c.num_props > 20)
        throw Error("explicit planner supports at most 20 propositions");
    for (const auto &term : fond.goal.terms)
        c.goal_terms.push_back(compile_literals(term, fond));
    for (const FondAction &a : fond.actions) {
        CompiledAction ca;
        ca.pre = compile_literals(a.pre, fond);
        for (const auto &outcome : a.outcomes) {
            MaskTest t = compile_literals(outcome, fond);
            ca.outcomes.push_back({t.value, t.mask & ~t.value});
        }
        if (a.dec_feature)
            ca.dec_prop = fond.prop_index(*a.dec_feature);
        for (const std::string &inc : a.inc_features)
            ca.inc_mask |= uint32_t(1) << fond.prop_index(inc);
        c.actions.push_back(ca);
    }
    // inits: every total valuation consistent with some init term, in
    // term order then ascending state order
    std::set<FondState> seen;
    for (const auto &term : fond.init.terms) {
        MaskTest t = compile_literals(term, fond);
        for (FondState s = 0; s < (FondState(1) << c.num_props); ++s)
            if (t.holds(s) && seen.insert(s).second)
                c.init_states.push_back(s);
    }
    return c;
}

}  // namespace

bool fond_goal_satisfied(const FondProblem &fond, FondState state) {
    return compile(fond).is_goal(state);
}

bool fond_pre_satisfied(const FondAction &action, const FondProblem &fond,
                        FondState state) {
    return compile_literals(action.pre, fond).holds(state);
}

FondState fond_apply(const FondProblem &fond, FondState state,
                     const FondAction &action, size_t outcome) {
    MaskTest t = compile_literals(action.outcomes.at(outcome), fond);
    return (state & ~(t.mask & ~t.value)) | t.value;
}

std::vector<FondState> fond_init_states(const FondProblem &fond) {
    return compile(fond).init_states;
}

std::optional<int> PolicyTable::action_at(FondState state) const {
    for (const PolicyEntry &e : entries)
        if (e.state == state)
            return e.action;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Strong-cyclic synthesis: the classic pruning fixpoint over the universal
// policy, followed by layered extraction and restriction to the states the
// chosen policy actually reaches.

SolveResult strong_cyclic_solve(const FondProblem &fond,
                                const std::set<std::pair<FondState, int>> &excluded) {
    auto t0 = std::chrono::steady_clock::now();
    CompiledFond c = compile(fond);
    const size_t num_states = size_t(1) << c.num_props;
    const size_t num_actions = c.actions.size();

    SolveResult result;
    result.stats.states_total = num_states;

    // retained[s * num_actions + a]
    std::vector<uint8_t> retained(num_states * num_actions, 0);
    std::vector<uint8_t> goal(num_states, 0);
    for (FondState s = 0; s < num_states; ++s)
        goal[s] = c.is_goal(s);
    for (FondState s = 0; s < num_states; ++s) {
        if (goal[s])
            continue;
        for (size_t a = 0; a < num_actions; ++a)
            if (c.actions[a].pre.holds(s) && !excluded.count({s, int(a)}))
                retained[s * num_actions + a] = 1;
    }

    auto has_retained = [&](FondState s) {
        for (size_t a = 0; a < num_actions; ++a)
            if (retained[s * num_actions + a])
                return true;
        return false;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        ++result.stats.prune_iterations;

        // prune pairs with an outcome falling off the structure
        for (FondState s = 0; s < num_states; ++s)
            for (size_t a = 0; a < num_actions; ++a) {
                if (!retained[s * num_actions + a])
                    continue;
                for (const CompiledOutcome &o : c.actions[a].outcomes) {
                    FondState t = o.apply(s);
                    if (!goal[t] && !has_retained(t)) {
                        retained[s * num_actions + a] = 0;
                        changed = true;
                        break;
                    }
                }
            }

        // prune pairs whose state cannot weakly reach the goal
        std::vector<uint8_t> connected(num_states, 0);
        bool growing = true;
        while (growing) {
            growing = false;
            for (FondState s = 0; s < num_states; ++s) {
                if (connected[s] || goal[s])
                    continue;
                for (size_t a = 0; a < num_actions && !connected[s]; ++a) {
                    if (!retained[s * num_actions + a])
                        continue;
                    for (const CompiledOutcome &o : c.actions[a].outcomes) {
                        FondState t = o.apply(s);
                        if (goal[t] || connected[t]) {
                            connected[s] = 1;
                            growing = true;
                            break;
                        }
                    }
                }
            }
        }
        for (FondState s = 0; s < num_states; ++s) {
            if (goal[s] || connected[s])
                continue;
            for (size_t a = 0; a < num_actions; ++a)
                if (retained[s * num_actions + a]) {
                    retained[s * num_actions + a] = 0;
                    changed = true;
                }
        }
    }

    for (FondState s : c.init_states)
        if (!goal[s] && !has_retained(s))
            result.core.push_back(s);
    if (!result.core.empty()) {
        auto t1 = std::chrono::steady_clock::now();
        result.stats.wall_ms =
            std::chrono::duration<double, std::milli>(t1 - t0).count();
        return result;
    }

    // layered extraction: states enter in rounds of "some outcome of a
    // retained action lands in an earlier layer", choosing the first such
    // action in declaration order; this keeps the goal reachable under the
    // single chosen action per state
    std::vector<int> chosen(num_states, -1);
    std::vector<uint8_t> covered(num_states, 0);
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::pair<FondState, int>> round;
        for (FondState s = 0; s < num_states; ++s) {
            if (goal[s] || covered[s])
                continue;
            int pick = -1;
            for (size_t a = 0; a < num_actions && pick < 0; ++a) {
                if (!retained[s * num_actions + a])
                    continue;
                for (const CompiledOutcome &o : c.actions[a].outcomes) {
                    FondState t = o.apply(s);
                    if (goal[t] || covered[t]) {
                        pick = int(a);
                        break;
                    }
                }
            }
            if (pick >= 0)
                round.push_back({s, pick});
        }
        for (auto [s, a] : round) {
            covered[s] = 1;
            chosen[s] = a;
            grew = true;
        }
    }

    // trim to the states reachable from the initial ones under the policy
    PolicyTable policy;
    policy.problem_hash = std::to_string(fnv1a(print_fond(fond)));
    std::vector<uint8_t> visited(num_states, 0);
    std::deque<FondState> queue;
    for (FondState s : c.init_states) {
        if (goal[s] || visited[s])
            continue;
        visited[s] = 1;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        FondState s = queue.front();
        queue.pop_front();
        int a = chosen[s];
        if (a < 0)
            throw Error("internal: uncovered state survived the fixpoint");
        policy.entries.push_back({s, a});
        for (const CompiledOutcome &o : c.actions[a].outcomes) {
            FondState t = o.apply(s);
            if (goal[t] || visited[t])
                continue;
            visited[t] = 1;
            queue.push_back(t);
        }
    }
    for (FondState s = 0; s < num_states; ++s)
        if (covered[s])
            ++result.stats.states_covered;

    auto t1 = std::chrono::steady_clock::now();
    result.stats.wall_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    policy.stats = result.stats;
    result.policy = std::move(policy);
    return result;
}

// ---------------------------------------------------------------------------
// Termination analysis.

PolicyGraph build_policy_graph(const PolicyTable &policy, const FondProblem &fond) {
    CompiledFond c = compile(fond);
    PolicyGraph graph;
    std::map<FondState, int> node_of;
    for (const PolicyEntry &e : policy.entries) {
        node_of[e.state] = int(graph.nodes.size());
        graph.nodes.push_back(e.state);
    }
    for (const PolicyEntry &e : policy.entries) {
        const CompiledAction &ca = c.actions.at(e.action);
        if (!ca.pre.holds(e.state))
            throw Error("policy action violates its precondition at " +
                        state_str(e.state, fond));
        if (c.is_goal(e.state))
            throw Error("policy maps a goal state");
        for (size_t o = 0; o < ca.outcomes.size(); ++o) {
            FondState t = ca.outcomes[o].apply(e.state);
            int to = -1;
            if (!c.is_goal(t)) {
                auto it = node_of.find(t);
                if (it == node_of.end())
                    throw Error("policy is not closed: outcome leaves it at " +
                                state_str(t, fond));
                to = it->second;
            }
            graph.edges.push_back({node_of.at(e.state), e.action, int(o), to,
                                   ca.dec_prop, ca.inc_mask});
        }
    }
    return graph;
}

namespace {

// Tarjan over the policy graph restricted to alive edges.
struct SccFinder {
    const PolicyGraph &graph;
    const std::vector<uint8_t> &alive;
    std::vector<std::vector<int>> out;  // edge indices per node
    std::vector<int> index, low, comp;
    std::vector<uint8_t> on_stack;
    std::vector<int> stack;
    int counter = 0, comps = 0;

    SccFinder(const PolicyGraph &graph, const std::vector<uint8_t> &alive)
        : graph(graph), alive(alive), out(graph.nodes.size()),
          index(graph.nodes.size(), -1), low(graph.nodes.size(), 0),
          comp(graph.nodes.size(), -1), on_stack(graph.nodes.size(), 0) {
        for (size_t e = 0; e < graph.edges.size(); ++e)
            if (alive[e] && graph.edges[e].to >= 0)
                out[graph.edges[e].from].push_back(int(e));
        for (size_t v = 0; v < graph.nodes.size(); ++v)
            if (index[v] < 0)
                visit(int(v));
    }

    void visit(int v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
        for (int e : out[v]) {
            int w = graph.edges[e].to;
            if (index[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            while (true) {
                int w = stack.back();
                stack.pop_back();
                on_stack[w] = 0;
                comp[w] = comps;
                if (w == v)
                    break;
            }
            ++comps;
        }
    }
};

std::string prop_name(int idx, const FondProblem &fond) {
    return fond.props[idx].name;
}

}  // namespace

std::string state_str(FondState state, const FondProblem &fond) {
    std::string out;
    for (size_t i = 0; i < fond.props.size(); ++i) {
        if (!out.empty())
            out += " ";
        bool positive = (state >> i) & 1;
        if (fond.props[i].kind == FeatureKind::boolean)
            out += positive ? fond.props[i].name : "!" + fond.props[i].name;
        else
            out += fond.props[i].name + (positive ? ">0" : "=0");
    }
    return out;
}

TerminationResult check_termination(const PolicyTable &policy,
                                    const FondProblem &fond) {
    PolicyGraph graph = build_policy_graph(policy, fond);
    TerminationResult result;
    std::vector<uint8_t> alive(graph.edges.size(), 1);

    while (true) {
        SccFinder scc(graph, alive);

        // group alive internal edges per component and keep only cyclic ones
        std::map<int, std::vector<int>> comp_edges;
        std::set<int> cyclic;
        for (size_t e = 0; e < graph.edges.size(); ++e) {
            if (!alive[e] || graph.edges[e].to < 0)
                continue;
            int cf = scc.comp[graph.edges[e].from];
            if (cf != scc.comp[graph.edges[e].to])
                continue;
            comp_edges[cf].push_back(int(e));
            cyclic.insert(cf);  // an intra-component edge implies a cycle
        }
        if (cyclic.empty()) {
            result.terminating = true;
            return result;
        }

        bool deleted = false;
        for (int component : cyclic) {
            const std::vector<int> &edges = comp_edges[component];
            // candidate variables: decremented inside, never incremented inside
            uint32_t dec_props = 0, inc_props = 0;
            for (int e : edges) {
                if (graph.edges[e].dec_prop >= 0)
                    dec_props |= uint32_t(1) << graph.edges[e].dec_prop;
                inc_props |= graph.edges[e].inc_mask;
            }
            uint32_t deletable = dec_props & ~inc_props;
            if (!deletable)
                continue;
            int prop = 0;
            while (!((deletable >> prop) & 1))
                ++prop;
            std::string line = "delete " + prop_name(prop, fond) +
                               "-- edges in component {";
            bool first = true;
            std::set<int> nodes;
            for (int e : edges) {
                nodes.insert(graph.edges[e].from);
                nodes.insert(graph.edges[e].to);
            }
            for (int v : nodes) {
                if (!first)
                    line += "; ";
                line += state_str(graph.nodes[v], fond);
                first = false;
            }
            line += "}";
            result.certificate.push_back(line);
            for (int e : edges)
                if (graph.edges[e].dec_prop == prop)
                    alive[e] = 0;
            deleted = true;
            break;  // recompute components before the next deletion
        }
        if (deleted)
            continue;

        // some cyclic component is stuck: build a fair lasso through all of
        // its edges (every decremented variable is also incremented there,
        // so the run violates no conditional-fairness clause)
        int stuck = *cyclic.begin();
        const std::vector<int> &edges = comp_edges[stuck];
        std::set<int> members;
        for (int e : edges) {
            members.insert(graph.edges[e].from);
            members.insert(graph.edges[e].to);
        }

        auto path_between = [&](int from, int to,
                                const std::set<int> &inside) {
            // BFS over alive edges restricted to `inside` (or anywhere when
            // inside is empty); returns the node sequence excluding `from`
            std::map<int, int> parent_edge;
            std::deque<int> queue{from};
            std::set<int> seen{from};
            while (!queue.empty()) {
                int v = queue.front();
                queue.pop_front();
                if (v == to && v != from)
                    break;
                for (size_t e = 0; e < graph.edges.size(); ++e) {
                    if (!alive[e] || graph.edges[e].from != v)
                        continue;
                    int w = graph.edges[e].to;
                    if (w < 0 || seen.count(w))
                        continue;
                    if (!inside.empty() && !inside.count(w))
                        continue;
                    seen.insert(w);
                    parent_edge[w] = int(e);
                    queue.push_back(w);
                }
            }
            std::vector<int> nodes;
            int cur = to;
            while (cur != from) {
                nodes.push_back(cur);
                auto it = parent_edge.find(cur);
                if (it == parent_edge.end())
                    return std::vector<int>{};  // unreachable
                cur = graph.edges[it->second].from;
            }
            std::reverse(nodes.begin(), nodes.end());
            return nodes;
        };

        Lasso lasso;
        // prefix: a run from some initial state into the stuck component
        int entry_node = *members.begin();
        {
            CompiledFond c = compile(fond);
            std::map<FondState, int> node_of;
            for (size_t v = 0; v < graph.nodes.size(); ++v)
                node_of[graph.nodes[v]] = int(v);
            std::set<int> anywhere;
            bool found = false;
            for (FondState init : c.init_states) {
                auto it = node_of.find(init);
                if (it == node_of.end())
                    continue;  // initial state satisfying the goal
                if (it->second == entry_node) {
                    lasso.prefix.push_back(init);
                    found = true;
                    break;
                }
                std::vector<int> path =
                    path_between(it->second, entry_node, anywhere);
                if (!path.empty()) {
                    lasso.prefix.push_back(init);
                    for (int v : path)
                        lasso.prefix.push_back(graph.nodes[v]);
                    found = true;
                    break;
                }
            }
            if (!found)  // fall back to the component itself
                lasso.prefix.push_back(graph.nodes[entry_node]);
        }
        // cycle: visit every edge of the stuck component once
        int cur = entry_node;
        for (int e : edges) {
            int from = graph.edges[e].from;
            for (int v : path_between(cur, from, members))
                lasso.cycle.push_back({graph.nodes[v], -1});
            lasso.cycle.push_back({graph.nodes[from], graph.edges[e].action});
            cur = graph.edges[e].to;
        }
        for (int v : path_between(cur, entry_node, members))
            lasso.cycle.push_back({graph.nodes[v], -1});
        // fill pass-through actions with the policy's choices
        for (auto &[state, action] : lasso.cycle)
            if (action < 0)
                action = *policy.action_at(state);
        result.terminating = false;
        result.lasso = lasso;
        return result;
    }
}

QualitativeResult qualitative_solve(const FondProblem &fond) {
    QualitativeResult result;
    std::set<std::pair<FondState, int>> excluded;
    size_t limit = (size_t(1) << fond.props.size()) * std::max<size_t>(1, fond.actions.size());
    for (size_t attempt = 1; attempt <= limit + 1; ++attempt) {
        SolveResult sc = strong_cyclic_solve(fond, excluded);
        result.stats = sc.stats;
        result.stats.attempts = attempt;
        if (!sc.policy) {
            result.core = sc.core;
            return result;
        }
        result.termination = check_termination(*sc.policy, fond);
        if (result.termination.terminating) {
            sc.policy->stats.attempts = attempt;
            result.policy = std::move(sc.policy);
            return result;
        }
        // Forbid one state-action pair on the rejected cycle. The sieve got
        // stuck because every variable decremented in the cycle is also
        // incremented there, so drop the first pair whose action does such
        // an increment; the remaining decrements can then make progress.
        const Lasso &lasso = *result.termination.lasso;
        std::set<std::string> decremented;
        for (const auto &[state, action] : lasso.cycle)
            if (fond.actions[action].dec_feature)
                decremented.insert(*fond.actions[action].dec_feature);
        std::optional<std::pair<FondState, int>> pick;
        for (const auto &pair : lasso.cycle) {
            for (const std::string &inc : fond.actions[pair.second].inc_features)
                if (decremented.count(inc)) {
                    pick = pair;
                    break;
                }
            if (pick)
                break;
        }
        if (!pick) {
            pick = lasso.cycle.front();
            for (const auto &pair : lasso.cycle)
                pick = std::min(*pick, pair);
        }
        if (excluded.count(*pick))
            throw Error("qualitative search revisited an exclusion");
        excluded.insert(*pick);
    }
    throw Error("qualitative search exceeded its exclusion budget");
}

// ---------------------------------------------------------------------------
// Policy serialization: one rule per line, `when <lits> do <action>` with a
// total valuation over the problem's propositions.

std::string print_policy(const PolicyTable &policy, const FondProblem &fond) {
    std::ostringstream out;
    for (const PolicyEntry &e : policy.entries)
        out << "when " << state_str(e.state, fond) << " do "
            << fond.actions.at(e.action).name << "\n";
    return out.str();
}

PolicyTable parse_policy(const std::string &text, const FondProblem &fond) {
    PolicyTable policy;
    policy.problem_hash = std::to_string(fnv1a(print_fond(fond)));
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        size_t hash = raw.find('#');
        if (hash != std::string::npos)
            raw = raw.substr(0, hash);
        Tokenizer tok(raw, line_no);
        if (tok.done())
            continue;
        std::string head = tok.symbol();
        if (head != "when")
            tok.fail("expected 'when'");
        uint32_t mask = 0, value = 0;
        while (true) {
            std::string word = tok.symbol();
            if (word == "do")
                break;
            AbstractLiteral lit;
            if (word.size() > 2 && word.substr(word.size() - 2) == "=0")
                lit = {word.substr(0, word.size() - 2), LitForm::Zero};
            else if (word.size() > 2 && word.substr(word.size() - 2) == ">0")
                lit = {word.substr(0, word.size() - 2), LitForm::Positive};
            else if (word[0] == '!')
                lit = {word.substr(1), LitForm::NegBool};
            else
                lit = {word, LitForm::PosBool};
            int idx = fond.prop_index(lit.feature);
            if (idx < 0)
                tok.fail("unknown proposition '" + lit.feature + "'");
            mask |= uint32_t(1) << idx;
            if (lit.form == LitForm::PosBool || lit.form == LitForm::Positive)
                value |= uint32_t(1) << idx;
            if (tok.done())
                tok.fail("missing 'do'");
        }
        if (mask != (uint32_t(1) << fond.props.size()) - 1)
            tok.fail("policy rules must assign every proposition");
        std::string action = tok.symbol();
        int idx = -1;
        for (size_t a = 0; a < fond.actions.size(); ++a)
            if (fond.actions[a].name == action)
                idx = int(a);
        if (idx < 0)
            tok.fail("unknown action '" + action + "'");
        if (policy.action_at(value))
            tok.fail("duplicate rule for this valuation");
        policy.entries.push_back({value, idx});
    }
    return policy;
}

}  // namespace gpp
