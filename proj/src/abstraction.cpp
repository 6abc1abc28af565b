#include "gpp/abstraction.hpp"

#include <sstream>

#include "gpp/lexer.hpp"

namespace gpp {

std::string AbstractLiteral::str() const {
    switch (form) {
    case LitForm::PosBool:
        return feature;
    case LitForm::NegBool:
        return "!" + feature;
    case LitForm::Zero:
        return feature + "=0";
    case LitForm::Positive:
        return feature + ">0";
    }
    return feature;
}

std::string AbstractEffect::str() const {
    switch (kind) {
    case EffKind::SetTrue:
        return feature;
    case EffKind::SetFalse:
        return "!" + feature;
    case EffKind::Inc:
        return feature + "++";
    case EffKind::Dec:
        return feature + "--";
    }
    return feature;
}

const AbstractEffect *AbstractAction::effect_on(const std::string &feature) const {
    for (const AbstractEffect &e : eff)
        if (e.feature == feature)
            return &e;
    return nullptr;
}

const AbstractLiteral *AbstractAction::pre_on(const std::string &feature) const {
    for (const AbstractLiteral &l : pre)
        if (l.feature == feature)
            return &l;
    return nullptr;
}

std::string AbstractAction::str() const {
    std::string out = "abstract " + name + " pre:";
    for (const AbstractLiteral &l : pre)
        out += " " + l.str();
    out += " eff:";
    for (const AbstractEffect &e : eff)
        out += " " + e.str();
    return out;
}

std::vector<std::string> validate_abstract_action(const AbstractAction &action,
                                                  const FeatureSet &fs) {
    std::vector<std::string> violations;
    auto kind_of = [&](const std::string &name) -> std::optional<FeatureKind> {
        int idx = fs.index_of(name);
        if (idx < 0) {
            violations.push_back(action.name + ": unknown feature '" + name + "'");
            return std::nullopt;
        }
        return fs.features[idx].kind;
    };

    std::vector<std::string> seen;
    for (const AbstractLiteral &l : action.pre) {
        auto kind = kind_of(l.feature);
        if (!kind)
            continue;
        bool boolean_form = l.form == LitForm::PosBool || l.form == LitForm::NegBool;
        if (boolean_form != (*kind == FeatureKind::boolean))
            violations.push_back(action.name + ": precondition " + l.str() +
                                 " does not match the kind of '" + l.feature + "'");
        for (const std::string &s : seen)
            if (s == l.feature)
                violations.push_back(action.name + ": feature '" + l.feature +
                                     "' constrained twice in Pre");
        seen.push_back(l.feature);
    }
    seen.clear();
    for (const AbstractEffect &e : action.eff) {
        auto kind = kind_of(e.feature);
        if (!kind)
            continue;
        bool boolean_form = e.kind == EffKind::SetTrue || e.kind == EffKind::SetFalse;
        if (boolean_form != (*kind == FeatureKind::boolean))
            violations.push_back(action.name + ": effect " + e.str() +
                                 " does not match the kind of '" + e.feature + "'");
        for (const std::string &s : seen)
            if (s == e.feature)
                violations.push_back(action.name + ": feature '" + e.feature +
                                     "' affected twice in Eff");
        seen.push_back(e.feature);
        if (e.kind == EffKind::Dec) {
            const AbstractLiteral *guard = action.pre_on(e.feature);
            if (!guard || guard->form != LitForm::Positive)
                violations.push_back(action.name + ": decrement of '" + e.feature +
                                     "' without " + e.feature +
                                     ">0 precondition");
        }
    }
    return violations;
}

bool pre_holds(const AbstractAction &action, const FeatureSet &fs,
               const BooleanValuation &v) {
    for (const AbstractLiteral &l : action.pre) {
        int idx = fs.index_of(l.feature);
        if (idx < 0)
            throw Error("unknown feature '" + l.feature + "' in " + action.name);
        bool positive = v.positive[idx];
        switch (l.form) {
        case LitForm::PosBool:
        case LitForm::Positive:
            if (!positive)
                return false;
            break;
        case LitForm::NegBool:
        case LitForm::Zero:
            if (positive)
                return false;
            break;
        }
    }
    return true;
}

bool represents(const AbstractAction &abstract, const GroundAction &ground,
                const Instance &inst, const State &s, const FeatureSet &fs,
                const Binding &binding) {
    return represents_at(abstract, ground, inst, s,
                         feature_valuation(fs, inst, s, binding), fs, binding);
}

bool represents_at(const AbstractAction &abstract, const GroundAction &ground,
                   const Instance &inst, const State &s,
                   const FeatureValuation &before, const FeatureSet &fs,
                   const Binding &binding) {
    if (!applicable_in(inst, s, ground))
        return false;
    if (!pre_holds(abstract, fs, before.project(fs)))
        return false;
    State next = s;
    next.remove_all(ground.del);
    next.add_all(ground.add);
    FeatureValuation after = feature_valuation(fs, inst, next, binding);

    for (size_t i = 0; i < fs.size(); ++i) {
        const Feature &f = fs.features[i];
        const AbstractEffect *e = abstract.effect_on(f.name);
        if (f.kind == FeatureKind::boolean) {
            bool was = before.values[i] > 0, now = after.values[i] > 0;
            // every flip must be declared
            if (was != now) {
                if (!e)
                    return false;
                if (now && e->kind != EffKind::SetTrue)
                    return false;
                if (!now && e->kind != EffKind::SetFalse)
                    return false;
            }
            // every declared boolean effect must hold afterwards
            if (e) {
                if (e->kind == EffKind::SetTrue && !now)
                    return false;
                if (e->kind == EffKind::SetFalse && now)
                    return false;
            }
        } else {
            // declared iff strictly changed, with matching sign
            bool declared_dec = e && e->kind == EffKind::Dec;
            bool declared_inc = e && e->kind == EffKind::Inc;
            if (declared_dec != (after.values[i] < before.values[i]))
                return false;
            if (declared_inc != (after.values[i] > before.values[i]))
                return false;
        }
    }
    return true;
}

std::string Witness::str() const {
    std::string out = "instance=" + instance + " state=" + state;
    if (!action.empty())
        out += " action=" + action;
    return out;
}

std::string Verdict::status_str() const {
    switch (status) {
    case verified:
        return "verified";
    case refuted:
        return "refuted";
    case inconclusive_truncated:
        return "inconclusive-truncated";
    }
    return "?";
}

Verdict check_soundness(const AbstractAction &action, const Family &family,
                        const FeatureSet &fs, size_t cap) {
    Verdict verdict;
    bool truncated = false;
    for (const FamilyMember &member : family.members) {
        const Instance &inst = member.instance;
        Binding binding = binding_from_pairs(member.binding);
        ReachableSet reachable = reachable_states(inst, cap);
        truncated = truncated || reachable.truncated;
        ++verdict.instances_checked;
        for (const State &s : reachable.states) {
            ++verdict.states_checked;
            FeatureValuation before = feature_valuation(fs, inst, s, binding);
            if (!pre_holds(action, fs, before.project(fs)))
                continue;
            bool found = false;
            for (const GroundAction &ga : inst.actions()) {
                if (!s.contains_all(ga.pre))
                    continue;
                if (represents_at(action, ga, inst, s, before, fs, binding)) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                verdict.status = Verdict::refuted;
                verdict.witnesses.push_back({inst.name(), inst.state_str(s), ""});
                return verdict;
            }
        }
    }
    if (truncated)
        verdict.status = Verdict::inconclusive_truncated;
    return verdict;
}

Verdict check_completeness(const std::vector<AbstractAction> &actions,
                           const Family &family, const FeatureSet &fs, size_t cap) {
    Verdict verdict;
    bool truncated = false;
    for (const FamilyMember &member : family.members) {
        const Instance &inst = member.instance;
        Binding binding = binding_from_pairs(member.binding);
        ReachableSet reachable = reachable_states(inst, cap);
        truncated = truncated || reachable.truncated;
        ++verdict.instances_checked;
        for (const State &s : reachable.states) {
            ++verdict.states_checked;
            FeatureValuation before = feature_valuation(fs, inst, s, binding);
            for (const GroundAction &ga : inst.actions()) {
                if (!s.contains_all(ga.pre))
                    continue;
                bool found = false;
                for (const AbstractAction &abstract : actions) {
                    if (represents_at(abstract, ga, inst, s, before, fs, binding)) {
                        found = true;
                        break;
                    }
                }
                if (!found) {
                    verdict.status = Verdict::refuted;
                    verdict.witnesses.push_back(
                        {inst.name(), inst.state_str(s), ga.str()});
                    return verdict;
                }
            }
        }
    }
    if (truncated)
        verdict.status = Verdict::inconclusive_truncated;
    return verdict;
}

// ---------------------------------------------------------------------------
// Parsing: abstract <name> pre: <lits> eff: <effs>
// Literals p, !p, n=0, n>0; effects p, !p, n++, n--.

namespace {

AbstractLiteral parse_literal(const std::string &text, Tokenizer &tok) {
    AbstractLiteral lit;
    if (auto pos = text.find("=0"); pos != std::string::npos && pos == text.size() - 2) {
        lit.feature = text.substr(0, pos);
        lit.form = LitForm::Zero;
    } else if (auto gt = text.find(">0");
               gt != std::string::npos && gt == text.size() - 2) {
        lit.feature = text.substr(0, gt);
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

AbstractEffect parse_effect(const std::string &text, Tokenizer &tok) {
    AbstractEffect eff;
    if (text.size() > 2 && text.substr(text.size() - 2) == "++") {
        eff.feature = text.substr(0, text.size() - 2);
        eff.kind = EffKind::Inc;
    } else if (text.size() > 2 && text.substr(text.size() - 2) == "--") {
        eff.feature = text.substr(0, text.size() - 2);
        eff.kind = EffKind::Dec;
    } else if (!text.empty() && text[0] == '!') {
        eff.feature = text.substr(1);
        eff.kind = EffKind::SetFalse;
    } else {
        eff.feature = text;
        eff.kind = EffKind::SetTrue;
    }
    if (eff.feature.empty())
        tok.fail("bad effect '" + text + "'");
    return eff;
}

}  // namespace

AbstractAction parse_abstract_action_line(const std::string &line, int line_no) {
    Tokenizer tok(line, line_no);
    std::string head = tok.symbol();
    if (head != "abstract")
        tok.fail("expected 'abstract'");
    AbstractAction action;
    action.name = tok.symbol();
    std::string section = tok.symbol();
    tok.expect(':');
    if (section != "pre")
        tok.fail("expected pre:");
    while (!tok.done()) {
        size_t save = tok.pos;
        std::string word = tok.symbol();
        if (word == "eff" && tok.accept(':'))
            break;
        tok.pos = save;
        action.pre.push_back(parse_literal(tok.symbol(), tok));
        if (tok.done())
            tok.fail("missing eff: section");
    }
    while (!tok.done())
        action.eff.push_back(parse_effect(tok.symbol(), tok));
    return action;
}

std::vector<AbstractAction> parse_abstract_actions(const std::string &text) {
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
        actions.push_back(parse_abstract_action_line(raw, line_no));
    }
    return actions;
}

Binding binding_from_pairs(
    const std::vector<std::pair<std::string, std::string>> &pairs) {
    Binding b;
    for (const auto &[param, object] : pairs)
        b.values[param] = object;
    return b;
}

}  // namespace gpp
