#ifndef GPP_STRIPS_HPP
#define GPP_STRIPS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

/*
  Ground STRIPS instances. An Instance owns a fixed universe of atoms
  (everything mentioned by init, goal, or any ground action), and states
  are bitsets over that universe. All types are immutable once built and
  safe to share across threads.
*/

namespace gpp {

struct Atom {
    std::string pred;
    std::vector<std::string> args;

    bool operator==(const Atom &other) const {
        return pred == other.pred && args == other.args;
    }
    bool operator<(const Atom &other) const {
        if (pred != other.pred)
            return pred < other.pred;
        return args < other.args;
    }
    std::string str() const;
};

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(const std::string &msg, int line, int column);
};

struct Error : std::runtime_error {
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

using AtomId = uint32_t;

// Fixed-width bitset over an instance's atom universe.
class State {
    std::vector<uint64_t> words_;

public:
    State() = default;
    explicit State(size_t num_atoms) : words_((num_atoms + 63) / 64, 0) {}

    bool test(AtomId id) const {
        return (words_[id >> 6] >> (id & 63)) & 1;
    }
    void set(AtomId id) {
        words_[id >> 6] |= uint64_t(1) << (id & 63);
    }
    void reset(AtomId id) {
        words_[id >> 6] &= ~(uint64_t(1) << (id & 63));
    }

    bool contains_all(const State &other) const {
        for (size_t i = 0; i < words_.size(); ++i)
            if ((words_[i] & other.words_[i]) != other.words_[i])
                return false;
        return true;
    }
    void add_all(const State &other) {
        for (size_t i = 0; i < words_.size(); ++i)
            words_[i] |= other.words_[i];
    }
    void remove_all(const State &other) {
        for (size_t i = 0; i < words_.size(); ++i)
            words_[i] &= ~other.words_[i];
    }
    size_t count() const;

    bool operator==(const State &other) const {
        return words_ == other.words_;
    }
    bool operator<(const State &other) const {
        return words_ < other.words_;
    }
    size_t hash() const {
        size_t h = 1469598103934665603ull;
        for (uint64_t w : words_) {
            h ^= w;
            h *= 1099511628211ull;
        }
        return h;
    }
};

struct StateHash {
    size_t operator()(const State &s) const {
        return s.hash();
    }
};

struct GroundAction {
    std::string name;
    std::vector<std::string> args;
    State pre;
    State add;
    State del;

    std::string str() const;
};

class Instance {
    std::string name_;
    std::string domain_tag_;
    std::vector<std::string> objects_;
    std::vector<Atom> atoms_;
    std::map<Atom, AtomId> atom_ids_;
    std::map<std::string, std::vector<AtomId>> atoms_by_pred_;
    std::vector<GroundAction> actions_;
    State init_;
    std::vector<Atom> goal_atoms_;
    State goal_;

    friend class InstanceBuilder;

public:
    const std::string &name() const { return name_; }
    const std::string &domain_tag() const { return domain_tag_; }
    const std::vector<std::string> &objects() const { return objects_; }
    const std::vector<GroundAction> &actions() const { return actions_; }
    const State &init() const { return init_; }
    const std::vector<Atom> &goal_atoms() const { return goal_atoms_; }

    size_t num_atoms() const { return atoms_.size(); }
    const Atom &atom(AtomId id) const { return atoms_[id]; }
    std::optional<AtomId> atom_id(const Atom &a) const;
    const std::vector<AtomId> &atoms_of_pred(const std::string &pred) const;

    State empty_state() const { return State(atoms_.size()); }
    bool is_goal(const State &s) const { return s.contains_all(goal_); }
    bool has_goal() const { return !goal_atoms_.empty(); }

    std::vector<Atom> decode(const State &s) const;
    std::string state_str(const State &s) const;
};

// Incremental construction used by the parser and the generators.
// Finalizing validates object declarations and add/del consistency.
class InstanceBuilder {
    struct PendingAction {
        std::string name;
        std::vector<std::string> args;
        std::vector<Atom> pre, add, del;
    };
    Instance inst_;
    std::vector<Atom> init_atoms_;
    std::vector<PendingAction> pending_;

public:
    InstanceBuilder(std::string name, std::string domain_tag);

    void add_object(const std::string &obj);
    AtomId intern(const Atom &a);
    void add_init(const Atom &a);
    void add_goal(const Atom &a);
    // Throws Error if add and del intersect.
    void add_action(const std::string &name, const std::vector<std::string> &args,
                    const std::vector<Atom> &pre, const std::vector<Atom> &add,
                    const std::vector<Atom> &del);
    // Returns false (and adds nothing) if the ground action is inconsistent;
    // used when grounding schemas, where such instantiations are skipped.
    bool add_action_if_consistent(const std::string &name,
                                  const std::vector<std::string> &args,
                                  const std::vector<Atom> &pre,
                                  const std::vector<Atom> &add,
                                  const std::vector<Atom> &del);
    Instance finish();
};

bool applicable_in(const Instance &inst, const State &s, const GroundAction &a);
std::vector<const GroundAction *> applicable(const Instance &inst, const State &s);
// Throws Error if a is not applicable in s.
State apply(const Instance &inst, const State &s, const GroundAction &a);

struct ReachableSet {
    std::vector<State> states;  // BFS order; states[0] is init
    bool truncated = false;
    size_t cap = 0;

    bool contains(const State &s) const;
};

constexpr size_t DEFAULT_REACHABILITY_CAP = 200000;

ReachableSet reachable_states(const Instance &inst,
                              size_t cap = DEFAULT_REACHABILITY_CAP);

Instance parse_instance(const std::string &text, const std::string &name = "instance");
std::string print_instance(const Instance &inst);

}  // namespace gpp

#endif
