#ifndef GPP_FEATURES_HPP
#define GPP_FEATURES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gpp/strips.hpp"

/*
  Boolean and numerical features over instances. Evaluators come from a
  small closed expression library so every feature stays auditable:

    atom(<pat>)            true iff some state atom matches <pat>
    count(<pat>)           number of state atoms matching <pat>
    count-above(<term>)    blocks transitively above <term>  (blocks domain)
    count-other(<term>)    blocks neither held nor in <term>'s tower
    manhattan(<pat>,cx,cy) city-block distance between the unique atom
                           matching <pat> (last two args are coordinates)
                           and the target point; '*' ignores an axis
    blank-detour(<pat>,cx,cy)
                           steps the blank needs before the tile matched by
                           <pat> can advance toward (cx,cy); see features.cpp

  Pattern arguments are object names, goal parameters ($x), '*' for any
  object, or !$x for any object except the binding of $x. Numerical
  features always evaluate to integers >= 0; boolean features treat any
  nonzero evaluation as true. Evaluation is a pure function of
  (instance, state, binding).
*/

namespace gpp {

enum class FeatureKind { boolean, numeric };

struct PatternArg {
    enum Kind { Const, Param, Any, NotParam } kind = Const;
    std::string text;  // object name or parameter name (without '$')
};

struct AtomPattern {
    std::string pred;
    std::vector<PatternArg> args;
};

struct FeatureExpr {
    enum Type { Count, CountAbove, CountOther, Manhattan, BlankDetour } type;
    AtomPattern pattern;       // Count/Manhattan/BlankDetour
    PatternArg subject;        // CountAbove/CountOther
    PatternArg cx, cy;         // Manhattan/BlankDetour targets
    bool exists_only = false;  // written atom(...) rather than count(...)
};

struct Feature {
    std::string name;
    FeatureKind kind = FeatureKind::boolean;
    FeatureExpr expr;
};

struct Binding {
    std::map<std::string, std::string> values;

    const std::string &at(const std::string &param) const;
};

struct FeatureSet {
    std::vector<Feature> features;
    // Optional generic goal, e.g. on($x,$y); empty when bindings are
    // supplied explicitly (tower-style families).
    std::vector<Atom> goal_pattern;

    int index_of(const std::string &name) const;  // -1 when absent
    const Feature &at(const std::string &name) const;
    size_t size() const { return features.size(); }
};

// Truth assignment to boolean features and to the atoms n=0. Stored as one
// flag per feature in declaration order: booleans hold their truth value,
// numericals hold "n > 0".
struct BooleanValuation {
    std::vector<uint8_t> positive;

    bool operator==(const BooleanValuation &other) const {
        return positive == other.positive;
    }
    bool operator<(const BooleanValuation &other) const {
        return positive < other.positive;
    }
    uint32_t bits() const;
};

struct FeatureValuation {
    std::vector<int64_t> values;

    BooleanValuation project(const FeatureSet &fs) const;
    bool operator==(const FeatureValuation &other) const {
        return values == other.values;
    }
    bool operator<(const FeatureValuation &other) const {
        return values < other.values;
    }
};

// Unifies the generic goal with inst's goal atoms. Throws Error with a
// "no-match"/"ambiguous-match" message when zero or several unifiers exist.
Binding bind_goal_parameters(const std::vector<Atom> &pattern, const Instance &inst);

int64_t evaluate(const Feature &feature, const Instance &inst, const State &s,
                 const Binding &binding);

BooleanValuation boolean_valuation(const FeatureSet &fs, const Instance &inst,
                                   const State &s, const Binding &binding);
FeatureValuation feature_valuation(const FeatureSet &fs, const Instance &inst,
                                   const State &s, const Binding &binding);

std::string valuation_str(const BooleanValuation &v, const FeatureSet &fs);

FeatureSet parse_feature_file(const std::string &text);

}  // namespace gpp

#endif
