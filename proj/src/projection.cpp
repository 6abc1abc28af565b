#include "gpp/projection.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "gpp/lexer.hpp"

namespace gpp {

bool Formula::satisfied_by(const BooleanValuation &v, const FeatureSet &fs) const {
    for (const auto &term : terms) {
        bool ok = true;
        for (const AbstractLiteral &lit : term) {
            int idx = fs.index_of(lit.feature);
            if (idx < 0)
                throw Error("unknown feature '" + lit.feature + "' in formula");
            bool positive = v.positive[idx];
            bool want_positive =
                lit.form == LitForm::PosBool || lit.form == LitForm::Positive;
            if (positive != want_positive) {
                ok = false;
                break;
            }
        }
        if (ok)
            return true;
    }
    return false;
}

std::string Formula::str() const {
    std::string out;
    for (size_t t = 0; t < terms.size(); ++t) {
        if (t > 0)
            out += " | ";
        for (size_t i = 0; i < terms[t].size(); ++i) {
            if (i > 0)
                out += " ";
            out += terms[t][i].str();
        }
    }
    return out;
}

int QnpProblem::var_index(const std::string &name) const {
    for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i].name == name)
            return static_cast<int>(i);
    return -1;
}

const AbstractAction *QnpProblem::action(const std::string &name) const {
    for (const AbstractAction &a : actions)
        if (a.name == name)
            return &a;
    return nullptr;
}

FeatureSet QnpProblem::var_view() const {
    FeatureSet fs;
    for (const VarDecl &v : vars) {
        Feature f;
        f.name = v.name;
        f.kind = v.kind;
        fs.features.push_back(f);
    }
    return fs;
}

int FondProblem::prop_index(const std::string &name) const {
    for (size_t i = 0; i < props.size(); ++i)
        if (props[i].name == name)
            return static_cast<int>(i);
    return -1;
}

FeatureSet FondProblem::prop_view() const {
    FeatureSet fs;
    for (const VarDecl &v : props) {
        Feature f;
        f.name = v.name;
        f.kind = v.kind;
        fs.features.push_back(f);
    }
    return fs;
}

namespace {

void check_literal_closure(const AbstractLiteral &lit,
                           const std::vector<VarDecl> &vars,
                           const std::string &where) {
    for (const VarDecl &v : vars)
        if (v.name == lit.feature) {
            bool boolean_form =
                lit.form == LitForm::PosBool || lit.form == LitForm::NegBool;
            if (boolean_form != (v.kind == FeatureKind::boolean))
                throw Error(where + ": literal " + lit.str() +
                            " does not match the kind of '" + lit.feature + "'");
            return;
        }
    throw Error(where + ": unknown feature '" + lit.feature + "'");
}

void check_formula_closure(const Formula &formula, const std::vector<VarDecl> &vars,
                           const std::string &where) {
    if (formula.terms.empty())
        throw Error(where + ": formula must have at least one term");
    for (const auto &term : formula.terms) {
        for (const AbstractLiteral &lit : term)
            check_literal_closure(lit, vars, where);
        for (size_t i = 0; i < term.size(); ++i)
            for (size_t j = i + 1; j < term.size(); ++j)
                if (term[i].feature == term[j].feature &&
                    term[i].form != term[j].form)
                    throw Error(where + ": term contradicts itself on '" +
                                term[i].feature + "'");
    }
}

}  // namespace

QnpProblem build_projection(const std::string &name, const std::vector<VarDecl> &vars,
                            const std::vector<AbstractAction> &actions,
                            const Formula &init, const Formula &goal) {
    QnpProblem qnp;
    qnp.name = name;
    qnp.vars = vars;
    qnp.actions = actions;
    qnp.init = init;
    qnp.goal = goal;
    check_formula_closure(init, vars, name + " init");
    check_formula_closure(goal, vars, name + " goal");
    for (const AbstractAction &a : actions) {
        for (const AbstractLiteral &lit : a.pre)
            check_literal_closure(lit, vars, name + " action " + a.name);
        for (const AbstractEffect &e : a.eff) {
            AbstractLiteral probe{e.feature, e.kind == EffKind::SetTrue ||
                                                     e.kind == EffKind::SetFalse
                                                 ? LitForm::PosBool
                                                 : LitForm::Positive};
            check_literal_closure(probe, vars, name + " action " + a.name);
        }
    }
    return qnp;
}

Verdict verify_interface_soundness(const Formula &init, const Formula &goal,
                                   const Family &family, const FeatureSet &fs,
                                   size_t cap) {
    Verdict verdict;
    bool truncated = false;
    for (const FamilyMember &member : family.members) {
        const Instance &inst = member.instance;
        Binding binding = binding_from_pairs(member.binding);
        ++verdict.instances_checked;

        BooleanValuation v0 = boolean_valuation(fs, inst, inst.init(), binding);
        ++verdict.states_checked;
        if (!init.satisfied_by(v0, fs)) {
            verdict.status = Verdict::refuted;
            verdict.witnesses.push_back(
                {inst.name(), inst.state_str(inst.init()), "init violates I_F"});
            return verdict;
        }

        ReachableSet reachable = reachable_states(inst, cap);
        truncated = truncated || reachable.truncated;
        for (const State &s : reachable.states) {
            ++verdict.states_checked;
            BooleanValuation v = boolean_valuation(fs, inst, s, binding);
            if (goal.satisfied_by(v, fs) && !inst.is_goal(s)) {
                verdict.status = Verdict::refuted;
                verdict.witnesses.push_back(
                    {inst.name(), inst.state_str(s), "satisfies G_F off the goal"});
                return verdict;
            }
        }
    }
    if (truncated)
        verdict.status = Verdict::inconclusive_truncated;
    return verdict;
}

FondProblem booleanize(const QnpProblem &qnp) {
    FondProblem fond;
    fond.name = qnp.name;
    fond.props = qnp.vars;
    fond.init = qnp.init;
    fond.goal = qnp.goal;
    for (const AbstractAction &a : qnp.actions) {
        FondAction fa;
        fa.name = a.name;
        fa.pre = a.pre;
        std::vector<AbstractLiteral> deterministic;
        std::optional<std::string> dec;
        for (const AbstractEffect &e : a.eff) {
            switch (e.kind) {
            case EffKind::SetTrue:
                deterministic.push_back({e.feature, LitForm::PosBool});
                break;
            case EffKind::SetFalse:
                deterministic.push_back({e.feature, LitForm::NegBool});
                break;
            case EffKind::Inc:
                deterministic.push_back({e.feature, LitForm::Positive});
                fa.inc_features.push_back(e.feature);
                break;
            case EffKind::Dec:
                if (dec)
                    throw Error("action " + a.name +
                                " decrements two variables; the boolean "
                                "projection supports one per action");
                dec = e.feature;
                break;
            }
        }
        if (dec) {
            fa.dec_feature = dec;
            std::vector<AbstractLiteral> stays = deterministic;
            stays.push_back({*dec, LitForm::Positive});
            std::vector<AbstractLiteral> hits = deterministic;
            hits.push_back({*dec, LitForm::Zero});
            fa.outcomes = {stays, hits};
        } else {
            fa.outcomes = {deterministic};
        }
        fond.actions.push_back(std::move(fa));
    }
    return fond;
}

QplusResult check_qplus_condition(const QnpProblem &qnp) {
    FeatureSet vars = qnp.var_view();
    FondProblem fond = booleanize(qnp);
    for (const VarDecl &var : qnp.vars) {
        if (var.kind != FeatureKind::numeric)
            continue;
        for (size_t ai = 0; ai < qnp.actions.size(); ++ai) {
            const AbstractAction &a = qnp.actions[ai];
            const AbstractEffect *e = a.effect_on(var.name);
            if (!e || e->kind != EffKind::Inc)
                continue;
            // the increment must co-occur with goal achievement: some
            // outcome, together with preconditions on untouched features,
            // entails a goal term
            const FondAction &fa = fond.actions[ai];
            bool achieving = false;
            for (const auto &outcome : fa.outcomes) {
                std::vector<AbstractLiteral> known = outcome;
                for (const AbstractLiteral &p : a.pre)
                    if (!a.effect_on(p.feature))
                        known.push_back(p);
                for (const auto &term : qnp.goal.terms) {
                    bool entailed = true;
                    for (const AbstractLiteral &lit : term) {
                        bool found = false;
                        for (const AbstractLiteral &k : known) {
                            if (k.feature != lit.feature)
                                continue;
                            bool k_pos = k.form == LitForm::PosBool ||
                                         k.form == LitForm::Positive;
                            bool l_pos = lit.form == LitForm::PosBool ||
                                         lit.form == LitForm::Positive;
                            if (k_pos == l_pos)
                                found = true;
                        }
                        if (!found) {
                            entailed = false;
                            break;
                        }
                    }
                    if (entailed) {
                        achieving = true;
                        break;
                    }
                }
                if (achieving)
                    break;
            }
            if (!achieving)
                return {false, "action " + a.name + " increments " + var.name +
                                   " without achieving the goal"};
        }
    }
    return {true, "every increment is goal-achieving or absent"};
}

FondProblem compile_dnf(const FondProblem &fond) {
    if (fond.goal.terms.size() <= 1)
        return fond;
    FondProblem out = fond;
    std::string aux = "goal";
    while (out.prop_index(aux) >= 0)
        aux += "_aux";
    out.props.push_back({aux, FeatureKind::boolean});
    for (auto &term : out.init.terms)
        term.push_back({aux, LitForm::NegBool});
    for (size_t t = 0; t < fond.goal.terms.size(); ++t) {
        FondAction reach;
        reach.name = "reach_goal_" + std::to_string(t + 1);
        reach.pre = fond.goal.terms[t];
        reach.outcomes = {{AbstractLiteral{aux, LitForm::PosBool}}};
        out.actions.push_back(std::move(reach));
    }
    out.goal.terms = {{AbstractLiteral{aux, LitForm::PosBool}}};
    return out;
}

std::vector<FeatureValuation> qnp_successors(const QnpProblem &qnp,
                                             const FeatureValuation &s,
                                             const AbstractAction &action,
                                             int delta_cap) {
    FeatureSet vars = qnp.var_view();
    if (!pre_holds(action, vars, s.project(vars)))
        throw Error("action " + action.name + " not applicable at this valuation");
    std::vector<FeatureValuation> results{s};
    for (const AbstractEffect &e : action.eff) {
        int idx = qnp.var_index(e.feature);
        std::vector<FeatureValuation> next;
        for (const FeatureValuation &v : results) {
            FeatureValuation w = v;
            switch (e.kind) {
            case EffKind::SetTrue:
                w.values[idx] = 1;
                next.push_back(w);
                break;
            case EffKind::SetFalse:
                w.values[idx] = 0;
                next.push_back(w);
                break;
            case EffKind::Inc:
                for (int d = 1; d <= delta_cap; ++d) {
                    w.values[idx] = v.values[idx] + d;
                    next.push_back(w);
                }
                break;
            case EffKind::Dec:
                // magnitudes may not drive the value negative
                for (int d = 1; d <= delta_cap && d <= v.values[idx]; ++d) {
                    w.values[idx] = v.values[idx] - d;
                    next.push_back(w);
                }
                break;
            }
        }
        results = std::move(next);
    }
    std::sort(results.begin(), results.end());
    results.erase(std::unique(results.begin(), results.end()), results.end());
    return results;
}

// ---------------------------------------------------------------------------
// QNP and FOND file grammars.

namespace {

AbstractLiteral literal_from_token(const std::string &text, Tokenizer &tok) {
    AbstractLiteral lit;
    if (text.size() > 2 && text.substr(text.size() - 2) == "=0") {
        lit.feature = text.substr(0, text.size() - 2);
        lit.form = LitForm::Zero;
    } else if (text.size() > 2 && text.substr(text.size() - 2) == ">0") {
        lit.feature = text.substr(0, text.size() - 2);
        lit.form = LitForm::Positive;
    } else if (!text.empty() && text[0] == '!') {
        lit.feature = text.substr(1);
        lit.form = LitForm::NegBool;
    } else {
        lit.feature = text;
        lit.form = LitForm::PosBool;
    }
    if (lit.feature.empty())
        tok.fail("bad literal '" + text + "'");
    return lit;
}

Formula parse_formula(Tokenizer &tok) {
    Formula formula;
    std::vector<AbstractLiteral> term;
    while (!tok.done()) {
        if (tok.accept('|')) {
            if (term.empty())
                tok.fail("empty term in formula");
            formula.terms.push_back(term);
            term.clear();
            continue;
        }
        term.push_back(literal_from_token(tok.symbol(), tok));
    }
    if (term.empty())
        tok.fail("empty term in formula");
    formula.terms.push_back(term);
    return formula;
}

}  // namespace

QnpProblem parse_qnp(const std::string &text) {
    std::string name = "qnp";
    std::vector<VarDecl> vars;
    std::optional<Formula> init, goal;
    std::vector<AbstractAction> actions;

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
        if (head == "qnp") {
            name = tok.symbol();
        } else if (head == "bool" || head == "num") {
            FeatureKind kind =
                head == "bool" ? FeatureKind::boolean : FeatureKind::numeric;
            while (!tok.done())
                vars.push_back({tok.symbol(), kind});
        } else if (head == "init") {
            init = parse_formula(tok);
        } else if (head == "goal") {
            goal = parse_formula(tok);
        } else if (head == "abstract") {
            actions.push_back(parse_abstract_action_line(raw, line_no));
        } else {
            tok.fail("unknown section '" + head + "'");
        }
    }
    if (!init || !goal)
        throw Error("qnp file needs init and goal formulas");
    return build_projection(name, vars, actions, *init, *goal);
}

std::string print_qnp(const QnpProblem &qnp) {
    std::ostringstream out;
    out << "qnp " << qnp.name << "\n";
    std::string bools, nums;
    for (const VarDecl &v : qnp.vars)
        (v.kind == FeatureKind::boolean ? bools : nums) += " " + v.name;
    if (!bools.empty())
        out << "bool" << bools << "\n";
    if (!nums.empty())
        out << "num" << nums << "\n";
    out << "init " << qnp.init.str() << "\n";
    out << "goal " << qnp.goal.str() << "\n";
    for (const AbstractAction &a : qnp.actions)
        out << a.str() << "\n";
    return out.str();
}

FondProblem parse_fond(const std::string &text) {
    FondProblem fond;
    fond.name = "fond";
    std::optional<Formula> init, goal;

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
        if (head == "fond") {
            fond.name = tok.symbol();
        } else if (head == "bool" || head == "num") {
            FeatureKind kind =
                head == "bool" ? FeatureKind::boolean : FeatureKind::numeric;
            while (!tok.done())
                fond.props.push_back({tok.symbol(), kind});
        } else if (head == "init") {
            init = parse_formula(tok);
        } else if (head == "goal") {
            goal = parse_formula(tok);
        } else if (head == "action") {
            FondAction action;
            action.name = tok.symbol();
            std::string section = tok.symbol();
            tok.expect(':');
            if (section != "pre")
                tok.fail("expected pre:");
            while (!tok.done()) {
                size_t save = tok.pos;
                std::string word = tok.symbol();
                if (word == "effect" && tok.accept(':'))
                    break;
                tok.pos = save;
                action.pre.push_back(literal_from_token(tok.symbol(), tok));
                if (tok.done())
                    tok.fail("missing effect: section");
            }
            std::vector<AbstractLiteral> outcome;
            while (!tok.done()) {
                if (tok.accept('|')) {
                    action.outcomes.push_back(outcome);
                    outcome.clear();
                    continue;
                }
                outcome.push_back(literal_from_token(tok.symbol(), tok));
            }
            action.outcomes.push_back(outcome);
            if (action.outcomes.size() > 2)
                tok.fail("at most two outcomes per action");
            fond.actions.push_back(std::move(action));
        } else {
            tok.fail("unknown section '" + head + "'");
        }
    }
    if (!init || !goal)
        throw Error("fond file needs init and goal formulas");
    fond.init = *init;
    fond.goal = *goal;

    // recover the increment/decrement labels from the effect shapes
    for (FondAction &a : fond.actions) {
        if (a.outcomes.size() == 2) {
            for (const AbstractLiteral &lit : a.outcomes[0])
                if (lit.form == LitForm::Positive)
                    for (const AbstractLiteral &other : a.outcomes[1])
                        if (other.feature == lit.feature &&
                            other.form == LitForm::Zero)
                            a.dec_feature = lit.feature;
        }
        for (const AbstractLiteral &lit : a.outcomes[0])
            if (lit.form == LitForm::Positive && lit.feature != a.dec_feature)
                a.inc_features.push_back(lit.feature);
    }
    return fond;
}

std::string print_fond(const FondProblem &fond) {
    std::ostringstream out;
    out << "fond " << fond.name << "\n";
    std::string bools, nums;
    for (const VarDecl &v : fond.props)
        (v.kind == FeatureKind::boolean ? bools : nums) += " " + v.name;
    if (!bools.empty())
        out << "bool" << bools << "\n";
    if (!nums.empty())
        out << "num" << nums << "\n";
    out << "init " << fond.init.str() << "\n";
    out << "goal " << fond.goal.str() << "\n";
    for (const FondAction &a : fond.actions) {
        out << "action " << a.name << " pre:";
        for (const AbstractLiteral &lit : a.pre)
            out << " " << lit.str();
        out << " effect:";
        for (size_t o = 0; o < a.outcomes.size(); ++o) {
            if (o > 0)
                out << " |";
            for (const AbstractLiteral &lit : a.outcomes[o])
                out << " " << lit.str();
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace gpp
