#ifndef GPP_ABSTRACTION_HPP
#define GPP_ABSTRACTION_HPP

#include <optional>
#include <string>
#include <vector>

#include "gpp/features.hpp"
#include "gpp/generators.hpp"
#include "gpp/strips.hpp"

/*
  Abstract actions over a feature set: pairs <Pre; Eff> whose preconditions
  are literals p, !p, n=0, n>0 and whose effects are p, !p, n++ (written
  n-up here) or n-- (n-down). An abstract action represents a ground action
  at a state when both are applicable there and they change the features
  the same way; soundness and completeness of action sets are checked by
  exhaustive enumeration over an instance family, so verdicts are always
  relative to the family and the reachability cap.
*/

namespace gpp {

enum class LitForm { PosBool, NegBool, Zero, Positive };
enum class EffKind { SetTrue, SetFalse, Inc, Dec };

struct AbstractLiteral {
    std::string feature;
    LitForm form;

    bool operator==(const AbstractLiteral &o) const {
        return feature == o.feature && form == o.form;
    }
    std::string str() const;
};

struct AbstractEffect {
    std::string feature;
    EffKind kind;

    bool operator==(const AbstractEffect &o) const {
        return feature == o.feature && kind == o.kind;
    }
    std::string str() const;
};

struct AbstractAction {
    std::string name;
    std::vector<AbstractLiteral> pre;
    std::vector<AbstractEffect> eff;

    const AbstractEffect *effect_on(const std::string &feature) const;
    const AbstractLiteral *pre_on(const std::string &feature) const;
    std::string str() const;
};

// Well-formedness per the abstract-action syntax: literal/effect forms must
// match the feature's kind, each feature appears at most once per side, and
// every decremented feature carries an n>0 precondition.
std::vector<std::string> validate_abstract_action(const AbstractAction &action,
                                                  const FeatureSet &fs);

bool pre_holds(const AbstractAction &action, const FeatureSet &fs,
               const BooleanValuation &v);

bool represents(const AbstractAction &abstract, const GroundAction &ground,
                const Instance &inst, const State &s, const FeatureSet &fs,
                const Binding &binding);

// Same check with the current state's valuation already at hand, so bulk
// scans evaluate each state once.
bool represents_at(const AbstractAction &abstract, const GroundAction &ground,
                   const Instance &inst, const State &s,
                   const FeatureValuation &before, const FeatureSet &fs,
                   const Binding &binding);

struct Witness {
    std::string instance;
    std::string state;
    std::string action;  // empty for soundness witnesses

    std::string str() const;
};

struct Verdict {
    enum Status { verified, refuted, inconclusive_truncated } status = verified;
    std::vector<Witness> witnesses;
    size_t instances_checked = 0;
    size_t states_checked = 0;

    bool ok() const { return status == verified; }
    std::string status_str() const;
};

// Sound: wherever Pre holds on a reachable state, the action represents at
// least one applicable ground action. Witnesses are (instance, state).
Verdict check_soundness(const AbstractAction &action, const Family &family,
                        const FeatureSet &fs,
                        size_t cap = DEFAULT_REACHABILITY_CAP);

// Complete: every applicable ground action at every reachable state is
// represented by some member. Witnesses are (instance, state, action).
Verdict check_completeness(const std::vector<AbstractAction> &actions,
                           const Family &family, const FeatureSet &fs,
                           size_t cap = DEFAULT_REACHABILITY_CAP);

// One abstract-action line: abstract <name> pre: <lits> eff: <effs>
AbstractAction parse_abstract_action_line(const std::string &line, int line_no);
std::vector<AbstractAction> parse_abstract_actions(const std::string &text);

Binding binding_from_pairs(
    const std::vector<std::pair<std::string, std::string>> &pairs);

}  // namespace gpp

#endif
