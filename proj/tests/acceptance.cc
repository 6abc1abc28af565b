// Acceptance suite: drives the bundled examples end to end and checks each
// criterion at its stated tolerance, printing one PASS/FAIL line per
// criterion. Returns the number of failed criteria.

#include <chrono>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "gpp/demos.hpp"
#include "gpp/executor.hpp"
#include "gpp/generators.hpp"

using namespace gpp;

namespace {

int failures = 0;

void criterion(int number, const std::string &name, bool ok,
               const std::string &detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << number << " (" << name
              << "): " << detail << "\n";
    if (!ok)
        ++failures;
}

double solve_ms(const DemoResult &demo) {
    auto t0 = std::chrono::steady_clock::now();
    QualitativeResult result = qualitative_solve(demo.fond);
    auto t1 = std::chrono::steady_clock::now();
    if (!result.policy)
        return -1.0;
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

std::string fmt_ms(double ms) {
    std::ostringstream out;
    out.precision(1);
    out << std::fixed << ms << " ms";
    return out.str();
}

// ---------------------------------------------------------------------------
// Bounded QNP simulation: explores every run of the policy over feature
// valuations, with update magnitudes 1..delta_cap and counters clamped at
// counter_cap. Decrements in the numeric space genuinely decrease, so every
// infinite run would be conditionally fair; goal reachability on all runs
// therefore reduces to: no cycles, and every terminal valuation satisfies
// the goal.

struct QnpSimulation {
    const QnpProblem &qnp;
    const FondProblem &fond;
    const PolicyTable &policy;
    FeatureSet vars;
    int delta_cap;
    int64_t counter_cap;
    std::map<std::vector<int64_t>, int> color;  // 1 exploring, 2 done
    size_t longest_path = 0;
    bool ok = true;
    std::string note;

    QnpSimulation(const QnpProblem &qnp, const FondProblem &fond,
                  const PolicyTable &policy, int delta_cap, int64_t counter_cap)
        : qnp(qnp), fond(fond), policy(policy), vars(qnp.var_view()),
          delta_cap(delta_cap), counter_cap(counter_cap) {}

    FondState project(const FeatureValuation &v) {
        FondState state = 0;
        for (size_t i = 0; i < v.values.size(); ++i)
            if (v.values[i] > 0)
                state |= FondState(1) << fond.prop_index(qnp.vars[i].name);
        return state;
    }

    // returns the longest run suffix from v, or 0 on merge/violation
    int64_t explore(const FeatureValuation &v) {
        if (!ok)
            return 0;
        auto it = color.find(v.values);
        if (it != color.end()) {
            if (it->second == 1) {
                ok = false;
                note = "cycle in the numeric run graph";
            }
            return 0;  // depth is not tracked across merges; boundedness
                       // follows from acyclicity over a finite graph
        }
        color[v.values] = 1;
        int64_t depth = 0;
        if (!qnp.goal.satisfied_by(v.project(vars), vars)) {
            std::optional<int> action = policy.action_at(project(v));
            if (!action) {
                ok = false;
                note = "policy undefined off the goal";
            } else {
                const AbstractAction *abstract =
                    qnp.action(fond.actions[*action].name);
                std::vector<FeatureValuation> successors =
                    qnp_successors(qnp, v, *abstract, delta_cap);
                if (successors.empty()) {
                    ok = false;
                    note = "action " + abstract->name + " has no successors";
                }
                for (FeatureValuation &next : successors) {
                    for (int64_t &value : next.values)
                        value = std::min(value, counter_cap);
                    depth = std::max(depth, explore(next) + 1);
                    if (!ok)
                        break;
                }
            }
        }
        color[v.values] = 2;
        longest_path = std::max(longest_path, static_cast<size_t>(depth));
        return depth;
    }

    bool run() {
        // every valuation consistent with some init term, numerics spread
        // over 0..counter_cap
        std::vector<FeatureValuation> starts;
        for (const auto &term : qnp.init.terms) {
            std::vector<FeatureValuation> partial{FeatureValuation{}};
            for (size_t i = 0; i < qnp.vars.size(); ++i) {
                const AbstractLiteral *lit = nullptr;
                for (const AbstractLiteral &l : term)
                    if (l.feature == qnp.vars[i].name)
                        lit = &l;
                std::vector<int64_t> options;
                if (qnp.vars[i].kind == FeatureKind::boolean) {
                    if (!lit)
                        options = {0, 1};
                    else
                        options = {lit->form == LitForm::PosBool ? int64_t(1)
                                                                 : int64_t(0)};
                } else {
                    if (!lit)
                        for (int64_t k = 0; k <= counter_cap; ++k)
                            options.push_back(k);
                    else if (lit->form == LitForm::Zero)
                        options = {0};
                    else
                        for (int64_t k = 1; k <= counter_cap; ++k)
                            options.push_back(k);
                }
                std::vector<FeatureValuation> grown;
                for (const FeatureValuation &p : partial)
                    for (int64_t value : options) {
                        FeatureValuation q = p;
                        q.values.push_back(value);
                        grown.push_back(q);
                    }
                partial = grown;
            }
            for (const FeatureValuation &v : partial)
                starts.push_back(v);
        }
        for (const FeatureValuation &v : starts) {
            explore(v);
            if (!ok)
                return false;
        }
        size_t bound = color.size() * (counter_cap + 1) *
                       std::max<size_t>(1, qnp.vars.size());
        if (longest_path > bound) {
            ok = false;
            note = "run length exceeds the stated bound";
        }
        return ok;
    }
};

int64_t eval_by_name(const DemoResult &demo, const std::string &feature,
                     const Instance &inst, const State &s, const Binding &b) {
    return evaluate(demo.fs.at(feature), inst, s, b);
}

}  // namespace

int main() {
    DemoOptions options;

    // --- criterion 1: the clear-block pipeline -----------------------------
    DemoResult qclear = run_demo("qclear", options);
    {
        double ms = solve_ms(qclear);
        bool policy_ok = qclear.policy_text ==
                         "when !H nx>0 do pick_above_x\n"
                         "when H nx>0 do put_aside\n";
        criterion(1, "qclear two-rule policy", policy_ok && ms >= 0 && ms < 1000,
                  "policy " + std::string(policy_ok ? "exact" : "WRONG") +
                      ", solve " + fmt_ms(ms));
    }

    // --- criterion 2: grids up to 6x6, exact step counts --------------------
    DemoResult qmove = run_demo("qmove", options);
    {
        double ms = solve_ms(qmove);
        // the four-term init formula also covers starts in the goal row, so
        // the two listed rules gain one completion rule for that case; the
        // first two entries are the listed policy verbatim
        bool policy_ok = qmove.policy_text ==
                         "when dx>0 dy>0 do move_in_row\n"
                         "when dx=0 dy>0 do move_in_column\n"
                         "when dx>0 dy=0 do move_in_row\n";
        Family family = build_family("qmove_le6");
        size_t runs = 0, good = 0;
        for (const FamilyMember &member : family.members) {
            Binding b = binding_from_pairs(member.binding);
            int64_t expect =
                eval_by_name(qmove, "dx", member.instance,
                             member.instance.init(), b) +
                eval_by_name(qmove, "dy", member.instance,
                             member.instance.init(), b);
            for (const char *strategy : {"first", "random:3", "adversarial"}) {
                Trajectory t = run_policy(*qmove.policy, qmove.fond, qmove.qnp,
                                          qmove.fs, member.instance, b,
                                          Strategy::parse(strategy));
                ++runs;
                if (t.outcome == Trajectory::goal_reached &&
                    static_cast<int64_t>(t.steps.size()) == expect)
                    ++good;
            }
        }
        criterion(2, "qmove policy and exact path lengths",
                  policy_ok && runs == good && ms >= 0 && ms < 1000,
                  std::to_string(good) + "/" + std::to_string(runs) +
                      " runs at dx+dy steps, solve " + fmt_ms(ms));
    }

    // --- criterion 3: sliding puzzles, 512 seeded instances -----------------
    DemoResult qslide = run_demo("qslide", options);
    {
        double ms = solve_ms(qslide);
        bool policy_ok = qslide.policy_text ==
                         "when dt>0 db>0 do move_blank\n"
                         "when dt>0 db=0 do move_tile\n";
        bool exec_ok = build_family("qslide_s500").members.size() >= 500 &&
                       qslide.execution.runs >= 1000 &&
                       qslide.execution.all_succeeded();
        criterion(3, "qslide policy and 3x3 executions",
                  policy_ok && exec_ok && ms >= 0 && ms < 1000,
                  std::to_string(qslide.execution.successes) + "/" +
                      std::to_string(qslide.execution.runs) +
                      " runs reach the target tile cell, solve " + fmt_ms(ms));
    }

    // --- criterion 4: on(x,y) with the seven-rule policy --------------------
    DemoResult qon = run_demo("qon", options);
    {
        double ms = solve_ms(qon);
        bool policy_ok = qon.policy_text ==
                         "when nx>0 ny>0 !X !H !on_xy do pick_above_x\n"
                         "when nx>0 ny>0 !X H !on_xy do put_other_aside\n"
                         "when nx=0 ny>0 !X H !on_xy do put_other_aside\n"
                         "when nx=0 ny>0 !X !H !on_xy do pick_above_y\n"
                         "when nx=0 ny=0 !X H !on_xy do put_other_aside\n"
                         "when nx=0 ny=0 !X !H !on_xy do pick_x\n"
                         "when nx=0 ny=0 X !H !on_xy do put_x_on_y\n";
        criterion(4, "qon seven-rule policy and executions",
                  policy_ok && qon.execution.all_succeeded() && ms >= 0 &&
                      ms < 1000,
                  std::to_string(qon.execution.successes) + "/" +
                      std::to_string(qon.execution.runs) +
                      " runs reach on(x,y), solve " + fmt_ms(ms));
    }

    // --- criterion 5: tower building, plus the bottom variant ---------------
    DemoResult qtower = run_demo("qtower", options);
    DemoResult qbottom = run_demo("qtower_bottom", options);
    {
        double ms = solve_ms(qtower) + solve_ms(qbottom);
        bool policy_ok = qtower.policy_text ==
                         "when !X !H Z nx>0 mx>0 do pick_other\n"
                         "when !X H Z nx>0 mx>0 do put_above_x\n"
                         "when !X H Z nx>0 mx=0 do put_above_x\n";

        Family family = build_family("qtower_le5");
        size_t runs = 0, towers = 0, bottoms = 0;
        for (const FamilyMember &member : family.members) {
            Binding b = binding_from_pairs(member.binding);
            const Instance &inst = member.instance;

            Trajectory t =
                run_policy(*qtower.policy, qtower.fond, qtower.qnp, qtower.fs,
                           inst, b, Strategy::parse("adversarial"));
            ++runs;
            bool arm_empty = t.final_state.test(*inst.atom_id({"armempty", {}}));
            if (t.outcome == Trajectory::policy_undefined && arm_empty &&
                eval_by_name(qtower, "mx", inst, t.final_state, b) == 0)
                ++towers;

            Trajectory tb =
                run_policy(*qbottom.policy, qbottom.fond, qbottom.qnp,
                           qbottom.fs, inst, b, Strategy::parse("adversarial"));
            int64_t above = eval_by_name(qbottom, "nx", inst, tb.final_state, b);
            bool on_table =
                tb.final_state.test(*inst.atom_id({"ontable", {"b1"}}));
            bool arm_empty_b =
                tb.final_state.test(*inst.atom_id({"armempty", {}}));
            if (tb.outcome == Trajectory::policy_undefined && on_table &&
                arm_empty_b &&
                above == static_cast<int64_t>(inst.objects().size()) - 1)
                ++bottoms;
        }
        criterion(5, "qtower policies and tower executions",
                  policy_ok && runs == towers && runs == bottoms &&
                      qtower.execution.all_succeeded() &&
                      qbottom.execution.all_succeeded() && ms >= 0 && ms < 2000,
                  std::to_string(towers) + "/" + std::to_string(runs) +
                      " single towers, " + std::to_string(bottoms) + "/" +
                      std::to_string(runs) + " bottom towers, solves " +
                      fmt_ms(ms));
    }

    // --- criterion 6: soundness and completeness oracle ---------------------
    {
        auto t0 = std::chrono::steady_clock::now();
        Family family = build_family("qclear_le4");
        bool ok = true;
        std::string detail;

        for (const auto &[name, verdict] : qclear.soundness)
            ok = ok && verdict.status == Verdict::verified;

        Verdict pair_complete =
            check_completeness(qclear.qnp.actions, family, qclear.fs);
        ok = ok && pair_complete.status == Verdict::refuted &&
             !pair_complete.witnesses.empty();
        if (!pair_complete.witnesses.empty())
            detail = "incompleteness witness " +
                     pair_complete.witnesses[0].action;

        // picking up the target itself is among the uncovered actions:
        // with everything on the table, pickup(x) is applicable yet
        // represented by neither action
        {
            Instance flat = make_blocksworld({{"b1"}, {"b2"}},
                                             {{"clear", {"b1"}}}, "flat");
            Binding b;
            b.values["x"] = "b1";
            const GroundAction *pickup_x = nullptr;
            for (const GroundAction &a : flat.actions())
                if (a.name == "pickup" && a.args == std::vector<std::string>{"b1"})
                    pickup_x = &a;
            bool covered = false;
            for (const AbstractAction &action : qclear.qnp.actions)
                covered = covered || represents(action, *pickup_x, flat,
                                                flat.init(), qclear.fs, b);
            ok = ok && !covered;
        }

        // the eight-action set over the same clear(x) family
        size_t verified = 0;
        for (const AbstractAction &action : qtower.qnp.actions) {
            Verdict verdict = check_soundness(action, family, qtower.fs);
            if (verdict.status == Verdict::verified)
                ++verified;
        }
        ok = ok && verified == 8;
        Verdict eight_complete =
            check_completeness(qtower.qnp.actions, family, qtower.fs);
        ok = ok && eight_complete.status == Verdict::verified;

        auto t1 = std::chrono::steady_clock::now();
        double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        ok = ok && ms < 60000;
        criterion(6, "soundness/completeness oracle", ok,
                  detail + ", eight actions verified=" +
                      std::to_string(verified) + "/8, total " + fmt_ms(ms));
    }

    // --- criterion 7: execution never fails where the verdicts verified -----
    {
        bool ok = true;
        std::string detail;
        const DemoResult *demos[] = {&qclear, &qmove, &qslide,
                                     &qon,    &qtower, &qbottom};
        for (const DemoResult *demo : demos) {
            bool implication = !demo->all_verdicts_verified() ||
                               demo->execution.all_succeeded();
            // stronger than the implication: every bundled policy executes
            // cleanly on its family regardless of the formal gaps
            ok = ok && implication && demo->execution.all_succeeded();
            detail += demo->name + "=" +
                      std::to_string(demo->execution.successes) + "/" +
                      std::to_string(demo->execution.runs) + " ";
        }
        criterion(7, "projection solutions generalize", ok, detail);
    }

    // --- criterion 8: bounded numeric simulation and the rejection case -----
    {
        bool ok = true;
        std::string detail;
        const DemoResult *demos[] = {&qclear, &qmove, &qslide,
                                     &qon,    &qtower, &qbottom};
        for (const DemoResult *demo : demos) {
            QnpSimulation sim(demo->qnp, demo->fond, *demo->policy, 3, 10);
            bool good = sim.run();
            ok = ok && good;
            detail += demo->name + (good ? " ok " : " FAIL(" + sim.note + ") ");
        }

        // a policy cycling through an increment is rejected with a lasso
        const char *bounce = "fond bounce\n"
                             "bool p\n"
                             "num n\n"
                             "init !p n>0\n"
                             "goal p n=0\n"
                             "action dec pre: !p n>0 effect: p n>0 | p n=0\n"
                             "action inc pre: p n>0 effect: !p n>0\n";
        FondProblem fond = parse_fond(bounce);
        PolicyTable cycling;
        cycling.entries = {{2, 0}, {3, 1}};
        TerminationResult term = check_termination(cycling, fond);
        ok = ok && !term.terminating && term.lasso.has_value() &&
             term.lasso->cycle.size() == 2;
        criterion(8, "bounded numeric simulation", ok,
                  detail + (term.terminating ? "" : "+ lasso rejection"));
    }

    // --- criterion 9: byte-identical demo artifacts --------------------------
    {
        DemoResult again = run_demo("qclear", options);
        DemoResult tower_again = run_demo("qtower", options);
        bool ok = again.report.str() == qclear.report.str() &&
                  again.policy_text == qclear.policy_text &&
                  tower_again.report.str() == qtower.report.str() &&
                  tower_again.policy_text == qtower.policy_text;
        criterion(9, "determinism of demo outputs", ok,
                  ok ? "reports and policies byte-identical" : "drift detected");
    }

    std::cout << (failures == 0 ? "ALL CRITERIA PASSED"
                                : std::to_string(failures) + " CRITERIA FAILED")
              << "\n";
    return failures;
}
