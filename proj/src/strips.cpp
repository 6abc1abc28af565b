#include "gpp/strips.hpp"

#include "gpp/lexer.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <deque>
#include <set>
#include <sstream>
#include <unordered_set>

namespace gpp {

std::string Atom::str() const {
    if (args.empty())
        return pred;
    std::string out = pred + "(";
    for (size_t i = 0; i < args.size(); ++i) {
        if (i > 0)
            out += ",";
        out += args[i];
    }
    out += ")";
    return out;
}

ParseError::ParseError(const std::string &msg, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + msg),
      line(line),
      column(column) {}

size_t State::count() const {
    size_t n = 0;
    for (uint64_t w : words_)
        n += std::popcount(w);
    return n;
}

std::string GroundAction::str() const {
    Atom a{name, args};
    return a.str();
}

std::optional<AtomId> Instance::atom_id(const Atom &a) const {
    auto it = atom_ids_.find(a);
    if (it == atom_ids_.end())
        return std::nullopt;
    return it->second;
}

const std::vector<AtomId> &Instance::atoms_of_pred(const std::string &pred) const {
    static const std::vector<AtomId> empty;
    auto it = atoms_by_pred_.find(pred);
    return it == atoms_by_pred_.end() ? empty : it->second;
}

std::vector<Atom> Instance::decode(const State &s) const {
    std::vector<Atom> out;
    for (AtomId id = 0; id < atoms_.size(); ++id)
        if (s.test(id))
            out.push_back(atoms_[id]);
    std::sort(out.begin(), out.end());
    return out;
}

std::string Instance::state_str(const State &s) const {
    std::string out = "{";
    bool first = true;
    for (const Atom &a : decode(s)) {
        if (!first)
            out += " ";
        out += a.str();
        first = false;
    }
    out += "}";
    return out;
}

InstanceBuilder::InstanceBuilder(std::string name, std::string domain_tag) {
    inst_.name_ = std::move(name);
    inst_.domain_tag_ = std::move(domain_tag);
}

void InstanceBuilder::add_object(const std::string &obj) {
    if (obj.empty())
        throw Error("empty object symbol");
    auto &objs = inst_.objects_;
    if (std::find(objs.begin(), objs.end(), obj) == objs.end())
        objs.push_back(obj);
}

AtomId InstanceBuilder::intern(const Atom &a) {
    if (a.pred.empty())
        throw Error("empty predicate symbol");
    for (const std::string &arg : a.args) {
        const auto &objs = inst_.objects_;
        if (std::find(objs.begin(), objs.end(), arg) == objs.end())
            throw Error("undeclared object '" + arg + "' in atom " + a.str());
    }
    auto it = inst_.atom_ids_.find(a);
    if (it != inst_.atom_ids_.end())
        return it->second;
    AtomId id = static_cast<AtomId>(inst_.atoms_.size());
    inst_.atoms_.push_back(a);
    inst_.atom_ids_.emplace(a, id);
    inst_.atoms_by_pred_[a.pred].push_back(id);
    return id;
}

void InstanceBuilder::add_init(const Atom &a) {
    intern(a);
    init_atoms_.push_back(a);
}

void InstanceBuilder::add_goal(const Atom &a) {
    intern(a);
    inst_.goal_atoms_.push_back(a);
}

namespace {

bool consistent_effects(const std::vector<Atom> &add, const std::vector<Atom> &del) {
    std::set<Atom> add_set(add.begin(), add.end());
    for (const Atom &d : del)
        if (add_set.count(d))
            return false;
    return true;
}

}  // namespace

void InstanceBuilder::add_action(const std::string &name,
                                 const std::vector<std::string> &args,
                                 const std::vector<Atom> &pre,
                                 const std::vector<Atom> &add,
                                 const std::vector<Atom> &del) {
    if (!consistent_effects(add, del))
        throw Error("inconsistent action " + Atom{name, args}.str() +
                    ": add and del intersect");
    for (const Atom &a : pre)
        intern(a);
    for (const Atom &a : add)
        intern(a);
    for (const Atom &a : del)
        intern(a);
    pending_.push_back(PendingAction{name, args, pre, add, del});
}

bool InstanceBuilder::add_action_if_consistent(const std::string &name,
                                               const std::vector<std::string> &args,
                                               const std::vector<Atom> &pre,
                                               const std::vector<Atom> &add,
                                               const std::vector<Atom> &del) {
    if (!consistent_effects(add, del))
        return false;
    add_action(name, args, pre, add, del);
    return true;
}

Instance InstanceBuilder::finish() {
    const size_t n = inst_.atoms_.size();
    auto encode = [&](const std::vector<Atom> &atoms) {
        State s(n);
        for (const Atom &a : atoms)
            s.set(inst_.atom_ids_.at(a));
        return s;
    };
    inst_.init_ = encode(init_atoms_);
    inst_.goal_ = encode(inst_.goal_atoms_);
    for (const PendingAction &p : pending_) {
        GroundAction ga;
        ga.name = p.name;
        ga.args = p.args;
        ga.pre = encode(p.pre);
        ga.add = encode(p.add);
        ga.del = encode(p.del);
        inst_.actions_.push_back(std::move(ga));
    }
    return std::move(inst_);
}

bool applicable_in(const Instance &, const State &s, const GroundAction &a) {
    return s.contains_all(a.pre);
}

std::vector<const GroundAction *> applicable(const Instance &inst, const State &s) {
    std::vector<const GroundAction *> out;
    for (const GroundAction &a : inst.actions())
        if (s.contains_all(a.pre))
            out.push_back(&a);
    return out;
}

State apply(const Instance &inst, const State &s, const GroundAction &a) {
    if (!applicable_in(inst, s, a))
        throw Error("action " + a.str() + " not applicable in " + inst.state_str(s));
    State next = s;
    next.remove_all(a.del);
    next.add_all(a.add);
    return next;
}

bool ReachableSet::contains(const State &s) const {
    for (const State &t : states)
        if (t == s)
            return true;
    return false;
}

ReachableSet reachable_states(const Instance &inst, size_t cap) {
    if (cap < 1)
        throw Error("reachability cap must be >= 1");
    ReachableSet result;
    result.cap = cap;
    std::unordered_set<State, StateHash> seen;
    std::deque<State> queue;
    seen.insert(inst.init());
    queue.push_back(inst.init());
    result.states.push_back(inst.init());
    State next = inst.init();  // scratch, reassigned in place
    while (!queue.empty()) {
        State s = queue.front();
        queue.pop_front();
        for (const GroundAction &a : inst.actions()) {
            if (!s.contains_all(a.pre))
                continue;
            next = s;
            next.remove_all(a.del);
            next.add_all(a.add);
            if (seen.count(next))
                continue;
            if (result.states.size() >= cap) {
                result.truncated = true;
                return result;
            }
            seen.insert(next);
            result.states.push_back(next);
            queue.push_back(next);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Instance file parsing.
//
// Line oriented, '#' starts a comment. Sections:
//   domain <tag>
//   objects <sym>+
//   init <atom>+
//   goal <atom>+
//   action <name>(<args>) pre: <atoms> add: <atoms> del: <atoms>
//   schema <name>(<vars>) pre: <atoms> add: <atoms> del: <atoms>
// Schemas are grounded over all object tuples; instantiations whose add and
// del lists intersect are skipped.

namespace {


Atom parse_atom_tok(Tokenizer &tok) {
    Atom a;
    a.pred = tok.symbol();
    if (tok.accept('(')) {
        if (!tok.accept(')')) {
            do {
                a.args.push_back(tok.symbol());
            } while (tok.accept(','));
            tok.expect(')');
        }
    }
    return a;
}

std::vector<Atom> parse_atom_list(Tokenizer &tok,
                                  const std::vector<std::string> &stop_words) {
    std::vector<Atom> atoms;
    while (!tok.done()) {
        size_t save = tok.pos;
        std::string next = tok.symbol();
        bool colon = tok.accept(':');
        tok.pos = save;
        if (colon) {
            bool stop = false;
            for (const std::string &w : stop_words)
                if (next == w) {
                    stop = true;
                    break;
                }
            if (stop)
                break;
        }
        atoms.push_back(parse_atom_tok(tok));
    }
    return atoms;
}

struct ActionText {
    std::string name;
    std::vector<std::string> params;
    std::vector<Atom> pre, add, del;
    int line_no;
};

ActionText parse_action_line(Tokenizer &tok) {
    ActionText act;
    act.line_no = tok.line_no;
    act.name = tok.symbol();
    if (tok.accept('(')) {
        if (!tok.accept(')')) {
            do {
                act.params.push_back(tok.symbol());
            } while (tok.accept(','));
            tok.expect(')');
        }
    }
    const std::vector<std::string> stops = {"pre", "add", "del"};
    while (!tok.done()) {
        std::string section = tok.symbol();
        tok.expect(':');
        std::vector<Atom> *target = nullptr;
        if (section == "pre")
            target = &act.pre;
        else if (section == "add")
            target = &act.add;
        else if (section == "del")
            target = &act.del;
        else
            tok.fail("expected pre:/add:/del:, got '" + section + "'");
        *target = parse_atom_list(tok, stops);
    }
    return act;
}

Atom substitute(const Atom &a, const std::map<std::string, std::string> &sub) {
    Atom out;
    out.pred = a.pred;
    for (const std::string &arg : a.args) {
        auto it = sub.find(arg);
        out.args.push_back(it == sub.end() ? arg : it->second);
    }
    return out;
}

}  // namespace

Instance parse_instance(const std::string &text, const std::string &name) {
    std::string domain_tag = "untagged";
    std::vector<std::string> objects;
    std::vector<Atom> init, goal;
    std::vector<ActionText> actions, schemas;
    bool saw_init = false;

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
        if (head == "domain") {
            domain_tag = tok.symbol();
        } else if (head == "objects") {
            while (!tok.done())
                objects.push_back(tok.symbol());
        } else if (head == "init") {
            if (saw_init && !init.empty())
                throw ParseError("duplicate init section", line_no, 1);
            saw_init = true;
            auto atoms = parse_atom_list(tok, {});
            init.insert(init.end(), atoms.begin(), atoms.end());
        } else if (head == "goal") {
            auto atoms = parse_atom_list(tok, {});
            goal.insert(goal.end(), atoms.begin(), atoms.end());
        } else if (head == "action") {
            actions.push_back(parse_action_line(tok));
        } else if (head == "schema") {
            schemas.push_back(parse_action_line(tok));
        } else {
            tok.fail("unknown section '" + head + "'");
        }
        if (!tok.done())
            tok.fail("trailing input");
    }

    InstanceBuilder builder(name, domain_tag);
    try {
        for (const std::string &obj : objects)
            builder.add_object(obj);
        for (const Atom &a : init)
            builder.add_init(a);
        for (const Atom &a : goal)
            builder.add_goal(a);
        for (const ActionText &act : actions) {
            // in explicit actions the parenthesized symbols are ground args
            builder.add_action(act.name, act.params, act.pre, act.add, act.del);
        }
        for (const ActionText &schema : schemas) {
            // ground over all object tuples, skipping inconsistent instantiations
            std::vector<std::string> tuple(schema.params.size());
            std::function<void(size_t)> ground = [&](size_t k) {
                if (k == schema.params.size()) {
                    std::map<std::string, std::string> sub;
                    for (size_t i = 0; i < schema.params.size(); ++i)
                        sub[schema.params[i]] = tuple[i];
                    std::vector<Atom> pre, add, del;
                    for (const Atom &a : schema.pre)
                        pre.push_back(substitute(a, sub));
                    for (const Atom &a : schema.add)
                        add.push_back(substitute(a, sub));
                    for (const Atom &a : schema.del)
                        del.push_back(substitute(a, sub));
                    builder.add_action_if_consistent(schema.name, tuple, pre, add, del);
                    return;
                }
                for (const std::string &obj : objects) {
                    tuple[k] = obj;
                    ground(k + 1);
                }
            };
            ground(0);
        }
    } catch (const Error &e) {
        throw ParseError(e.what(), line_no, 1);
    }
    return builder.finish();
}

namespace {

void print_atoms(std::ostringstream &out, const std::vector<Atom> &atoms) {
    std::vector<Atom> sorted = atoms;
    std::sort(sorted.begin(), sorted.end());
    for (const Atom &a : sorted)
        out << " " << a.str();
}

}  // namespace

std::string print_instance(const Instance &inst) {
    std::ostringstream out;
    out << "domain " << inst.domain_tag() << "\n";
    out << "objects";
    for (const std::string &obj : inst.objects())
        out << " " << obj;
    out << "\n";
    out << "init";
    print_atoms(out, inst.decode(inst.init()));
    out << "\n";
    if (inst.has_goal()) {
        out << "goal";
        std::vector<Atom> goal = inst.goal_atoms();
        print_atoms(out, goal);
        out << "\n";
    }
    for (const GroundAction &a : inst.actions()) {
        out << "action " << a.str();
        out << " pre:";
        print_atoms(out, inst.decode(a.pre));
        out << " add:";
        print_atoms(out, inst.decode(a.add));
        out << " del:";
        print_atoms(out, inst.decode(a.del));
        out << "\n";
    }
    return out.str();
}

}  // namespace gpp
