#include "gpp/features.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "gpp/lexer.hpp"

namespace gpp {

const std::string &Binding::at(const std::string &param) const {
    auto it = values.find(param);
    if (it == values.end())
        throw Error("unbound goal parameter '$" + param + "'");
    return it->second;
}

int FeatureSet::index_of(const std::string &name) const {
    for (size_t i = 0; i < features.size(); ++i)
        if (features[i].name == name)
            return static_cast<int>(i);
    return -1;
}

const Feature &FeatureSet::at(const std::string &name) const {
    int idx = index_of(name);
    if (idx < 0)
        throw Error("unknown feature '" + name + "'");
    return features[idx];
}

uint32_t BooleanValuation::bits() const {
    uint32_t mask = 0;
    for (size_t i = 0; i < positive.size(); ++i)
        if (positive[i])
            mask |= uint32_t(1) << i;
    return mask;
}

BooleanValuation FeatureValuation::project(const FeatureSet &fs) const {
    (void)fs;
    BooleanValuation v;
    v.positive.resize(values.size());
    for (size_t i = 0; i < values.size(); ++i)
        v.positive[i] = values[i] > 0;
    return v;
}

namespace {

// the binding is resolved once per scan, not once per candidate atom
struct ResolvedPattern {
    const AtomPattern &pattern;
    std::vector<const std::string *> resolved;  // Param/NotParam targets

    ResolvedPattern(const AtomPattern &pattern, const Binding &binding)
        : pattern(pattern), resolved(pattern.args.size(), nullptr) {
        for (size_t i = 0; i < pattern.args.size(); ++i)
            if (pattern.args[i].kind == PatternArg::Param ||
                pattern.args[i].kind == PatternArg::NotParam)
                resolved[i] = &binding.at(pattern.args[i].text);
    }

    bool matches(const Atom &atom) const {
        if (atom.args.size() != pattern.args.size())
            return false;
        for (size_t i = 0; i < pattern.args.size(); ++i) {
            const PatternArg &arg = pattern.args[i];
            switch (arg.kind) {
            case PatternArg::Const:
                if (atom.args[i] != arg.text)
                    return false;
                break;
            case PatternArg::Param:
                if (atom.args[i] != *resolved[i])
                    return false;
                break;
            case PatternArg::Any:
                break;
            case PatternArg::NotParam:
                if (atom.args[i] == *resolved[i])
                    return false;
                break;
            }
        }
        return true;
    }
};

std::string resolve(const PatternArg &arg, const Binding &binding) {
    if (arg.kind == PatternArg::Param)
        return binding.at(arg.text);
    if (arg.kind == PatternArg::Const)
        return arg.text;
    throw Error("expected object or parameter argument");
}

int64_t eval_count(const FeatureExpr &expr, const Instance &inst, const State &s,
                   const Binding &binding) {
    int64_t n = 0;
    ResolvedPattern pattern(expr.pattern, binding);
    for (AtomId id : inst.atoms_of_pred(expr.pattern.pred)) {
        if (!s.test(id))
            continue;
        if (pattern.matches(inst.atom(id))) {
            ++n;
            if (expr.exists_only)
                return 1;
        }
    }
    return n;
}

// map block -> block directly on top of it, per the state's on-atoms
std::map<std::string, std::string> on_top_map(const Instance &inst, const State &s) {
    std::map<std::string, std::string> above;
    for (AtomId id : inst.atoms_of_pred("on"))
        if (s.test(id)) {
            const Atom &a = inst.atom(id);
            above[a.args[1]] = a.args[0];
        }
    return above;
}

bool held(const Instance &inst, const State &s, const std::string &block) {
    auto id = inst.atom_id({"holding", {block}});
    return id && s.test(*id);
}

int64_t eval_count_above(const std::string &block, const Instance &inst,
                         const State &s) {
    auto above = on_top_map(inst, s);
    int64_t n = 0;
    std::string cur = block;
    while (true) {
        auto it = above.find(cur);
        if (it == above.end())
            break;
        cur = it->second;
        ++n;
        if (n > static_cast<int64_t>(inst.objects().size()))
            throw Error("cyclic on-relation while evaluating count-above");
    }
    return n;
}

std::set<std::string> tower_of_block(const Instance &inst, const State &s,
                                     const std::string &block) {
    std::set<std::string> tower{block};
    if (held(inst, s, block))
        return tower;
    auto above = on_top_map(inst, s);
    std::map<std::string, std::string> below;
    for (const auto &[lo, hi] : above)
        below[hi] = lo;
    std::string cur = block;
    while (above.count(cur)) {
        cur = above.at(cur);
        tower.insert(cur);
    }
    cur = block;
    while (below.count(cur)) {
        cur = below.at(cur);
        tower.insert(cur);
    }
    return tower;
}

int64_t eval_count_other(const std::string &block, const Instance &inst,
                         const State &s) {
    std::set<std::string> tower = tower_of_block(inst, s, block);
    int64_t n = 0;
    for (const std::string &b : inst.objects()) {
        if (b == block || tower.count(b) || held(inst, s, b))
            continue;
        ++n;
    }
    return n;
}

int64_t coord_of(const std::string &symbol) {
    if (symbol.empty())
        throw Error("empty coordinate symbol");
    int64_t value = 0;
    for (char c : symbol) {
        if (c < '0' || c > '9')
            throw Error("coordinate symbol '" + symbol + "' is not a numeral");
        value = value * 10 + (c - '0');
    }
    return value;
}

const Atom &unique_match(const AtomPattern &pattern, const Instance &inst,
                         const State &s, const Binding &binding) {
    const Atom *found = nullptr;
    ResolvedPattern resolved(pattern, binding);
    for (AtomId id : inst.atoms_of_pred(pattern.pred)) {
        if (!s.test(id) || !resolved.matches(inst.atom(id)))
            continue;
        if (found)
            throw Error("pattern " + pattern.pred + "(...) matches several atoms");
        found = &inst.atom(id);
    }
    if (!found)
        throw Error("pattern " + pattern.pred + "(...) matches no atom in state");
    return *found;
}

struct Point {
    int64_t x, y;
    bool operator==(const Point &o) const { return x == o.x && y == o.y; }
};

Point atom_point(const Atom &a) {
    if (a.args.size() < 2)
        throw Error("atom " + a.str() + " has no coordinate arguments");
    return {coord_of(a.args[a.args.size() - 2]), coord_of(a.args[a.args.size() - 1])};
}

int64_t eval_manhattan(const FeatureExpr &expr, const Instance &inst, const State &s,
                       const Binding &binding) {
    Point p = atom_point(unique_match(expr.pattern, inst, s, binding));
    int64_t d = 0;
    if (expr.cx.kind != PatternArg::Any)
        d += std::abs(p.x - coord_of(resolve(expr.cx, binding)));
    if (expr.cy.kind != PatternArg::Any)
        d += std::abs(p.y - coord_of(resolve(expr.cy, binding)));
    return d;
}

/*
  blank-detour: the number of grid steps the blank must take, never crossing
  the tracked tile's cell, before that tile can make a move that lowers its
  city-block distance to the target.

  While the tile is off target this is the shortest blank path to any cell
  adjacent to the tile in a distance-decreasing direction. Once the tile
  sits on its target there is no such cell; the value is then the blank's
  distance to a fixed parking cell (the first cell in row-major order at
  city-block distance >= 2 from the tile), which keeps the value positive
  right after the final tile move and decreasable everywhere else. The
  on-target convention is this library's own; executions that stop at the
  goal never observe it.
*/
int64_t eval_blank_detour(const FeatureExpr &expr, const Instance &inst,
                          const State &s, const Binding &binding) {
    Point tile = atom_point(unique_match(expr.pattern, inst, s, binding));
    Point goal{coord_of(resolve(expr.cx, binding)),
               coord_of(resolve(expr.cy, binding))};

    Point blank{0, 0};
    {
        const Atom *found = nullptr;
        for (AtomId id : inst.atoms_of_pred("atB"))
            if (s.test(id)) {
                if (found)
                    throw Error("state has several blanks");
                found = &inst.atom(id);
            }
        if (!found)
            throw Error("state has no blank");
        blank = atom_point(*found);
    }

    // grid bounds: the blank can sit on any cell, so its atom universe
    // spans the grid
    int64_t width = 0, height = 0;
    for (AtomId id : inst.atoms_of_pred("atB")) {
        Point p = atom_point(inst.atom(id));
        width = std::max(width, p.x);
        height = std::max(height, p.y);
    }

    auto mdist = [](Point a, Point b) {
        return std::abs(a.x - b.x) + std::abs(a.y - b.y);
    };
    std::vector<Point> targets;
    if (!(tile == goal)) {
        const int dx[] = {1, -1, 0, 0};
        const int dy[] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            Point c{tile.x + dx[d], tile.y + dy[d]};
            if (c.x < 1 || c.x > width || c.y < 1 || c.y > height)
                continue;
            if (mdist(c, goal) < mdist(tile, goal))
                targets.push_back(c);
        }
    } else {
        for (int64_t y = 1; y <= height && targets.empty(); ++y)
            for (int64_t x = 1; x <= width; ++x)
                if (std::abs(x - tile.x) + std::abs(y - tile.y) >= 2) {
                    targets.push_back({x, y});
                    break;
                }
        if (targets.empty())
            throw Error("grid too small for the blank-detour parking cell");
    }

    // BFS from the blank, avoiding the tile's cell
    std::vector<int64_t> dist(static_cast<size_t>(width * height), -1);
    auto idx = [&](Point p) {
        return static_cast<size_t>((p.y - 1) * width + p.x - 1);
    };
    std::vector<Point> queue{blank};
    size_t head = 0;
    dist[idx(blank)] = 0;
    while (head < queue.size()) {
        Point p = queue[head++];
        const int dx[] = {1, -1, 0, 0};
        const int dy[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            Point q{p.x + dx[k], p.y + dy[k]};
            if (q.x < 1 || q.x > width || q.y < 1 || q.y > height)
                continue;
            if (q == tile || dist[idx(q)] >= 0)
                continue;
            dist[idx(q)] = dist[idx(p)] + 1;
            queue.push_back(q);
        }
    }
    int64_t best = -1;
    for (Point t : targets) {
        int64_t dt = dist[idx(t)];
        if (dt >= 0 && (best < 0 || dt < best))
            best = dt;
    }
    if (best < 0)
        throw Error("blank cannot reach any enabling cell");
    return best;
}

}  // namespace

int64_t evaluate(const Feature &feature, const Instance &inst, const State &s,
                 const Binding &binding) {
    int64_t value = 0;
    switch (feature.expr.type) {
    case FeatureExpr::Count:
        value = eval_count(feature.expr, inst, s, binding);
        break;
    case FeatureExpr::CountAbove:
        value = eval_count_above(resolve(feature.expr.subject, binding), inst, s);
        break;
    case FeatureExpr::CountOther:
        value = eval_count_other(resolve(feature.expr.subject, binding), inst, s);
        break;
    case FeatureExpr::Manhattan:
        value = eval_manhattan(feature.expr, inst, s, binding);
        break;
    case FeatureExpr::BlankDetour:
        value = eval_blank_detour(feature.expr, inst, s, binding);
        break;
    }
    if (value < 0)
        throw Error("feature " + feature.name + " evaluated to a negative value");
    if (feature.kind == FeatureKind::boolean)
        return value > 0 ? 1 : 0;
    return value;
}

BooleanValuation boolean_valuation(const FeatureSet &fs, const Instance &inst,
                                   const State &s, const Binding &binding) {
    BooleanValuation v;
    v.positive.reserve(fs.size());
    for (const Feature &f : fs.features)
        v.positive.push_back(evaluate(f, inst, s, binding) > 0);
    return v;
}

FeatureValuation feature_valuation(const FeatureSet &fs, const Instance &inst,
                                   const State &s, const Binding &binding) {
    FeatureValuation v;
    v.values.reserve(fs.size());
    for (const Feature &f : fs.features)
        v.values.push_back(evaluate(f, inst, s, binding));
    return v;
}

std::string valuation_str(const BooleanValuation &v, const FeatureSet &fs) {
    std::string out;
    for (size_t i = 0; i < fs.size(); ++i) {
        if (!out.empty())
            out += " ";
        const Feature &f = fs.features[i];
        if (f.kind == FeatureKind::boolean)
            out += v.positive[i] ? f.name : "!" + f.name;
        else
            out += f.name + (v.positive[i] ? ">0" : "=0");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Goal parameter binding.

Binding bind_goal_parameters(const std::vector<Atom> &pattern, const Instance &inst) {
    std::set<std::map<std::string, std::string>> unifiers;
    std::map<std::string, std::string> current;
    const std::vector<Atom> &goal = inst.goal_atoms();

    std::function<void(size_t)> unify = [&](size_t k) {
        if (k == pattern.size()) {
            unifiers.insert(current);
            return;
        }
        for (const Atom &g : goal) {
            if (g.pred != pattern[k].pred || g.args.size() != pattern[k].args.size())
                continue;
            std::vector<std::string> bound;
            bool ok = true;
            for (size_t i = 0; i < g.args.size() && ok; ++i) {
                const std::string &p = pattern[k].args[i];
                if (!p.empty() && p[0] == '$') {
                    std::string var = p.substr(1);
                    auto it = current.find(var);
                    if (it == current.end()) {
                        current[var] = g.args[i];
                        bound.push_back(var);
                    } else if (it->second != g.args[i]) {
                        ok = false;
                    }
                } else if (p != g.args[i]) {
                    ok = false;
                }
            }
            if (ok)
                unify(k + 1);
            for (const std::string &var : bound)
                current.erase(var);
        }
    };
    unify(0);

    if (unifiers.empty())
        throw Error("no-match: goal pattern does not unify with the instance goal");
    if (unifiers.size() > 1)
        throw Error("ambiguous-match: " + std::to_string(unifiers.size()) +
                    " unifiers for the goal pattern");
    Binding b;
    b.values = *unifiers.begin();
    return b;
}

// ---------------------------------------------------------------------------
// Feature file parsing.

namespace {

PatternArg parse_pattern_arg(const std::string &text, Tokenizer &tok) {
    PatternArg arg;
    if (text == "*") {
        arg.kind = PatternArg::Any;
    } else if (text.size() >= 2 && text[0] == '$') {
        arg.kind = PatternArg::Param;
        arg.text = text.substr(1);
    } else if (text.size() >= 3 && text[0] == '!' && text[1] == '$') {
        arg.kind = PatternArg::NotParam;
        arg.text = text.substr(2);
    } else if (!text.empty() && text[0] != '!' && text[0] != '$') {
        arg.kind = PatternArg::Const;
        arg.text = text;
    } else {
        tok.fail("bad pattern argument '" + text + "'");
    }
    return arg;
}

AtomPattern parse_pattern(Tokenizer &tok) {
    AtomPattern pattern;
    pattern.pred = tok.symbol();
    if (tok.accept('(')) {
        if (!tok.accept(')')) {
            do {
                pattern.args.push_back(parse_pattern_arg(tok.symbol(), tok));
            } while (tok.accept(','));
            tok.expect(')');
        }
    }
    return pattern;
}

FeatureExpr parse_expr(Tokenizer &tok) {
    FeatureExpr expr;
    std::string head = tok.symbol();
    tok.expect('(');
    if (head == "atom" || head == "count") {
        expr.type = FeatureExpr::Count;
        expr.exists_only = head == "atom";
        expr.pattern = parse_pattern(tok);
    } else if (head == "count-above" || head == "count-other") {
        expr.type = head == "count-above" ? FeatureExpr::CountAbove
                                          : FeatureExpr::CountOther;
        expr.subject = parse_pattern_arg(tok.symbol(), tok);
    } else if (head == "manhattan" || head == "blank-detour") {
        expr.type = head == "manhattan" ? FeatureExpr::Manhattan
                                        : FeatureExpr::BlankDetour;
        expr.pattern = parse_pattern(tok);
        tok.expect(',');
        expr.cx = parse_pattern_arg(tok.symbol(), tok);
        tok.expect(',');
        expr.cy = parse_pattern_arg(tok.symbol(), tok);
        if (expr.type == FeatureExpr::BlankDetour &&
            (expr.cx.kind == PatternArg::Any || expr.cy.kind == PatternArg::Any))
            tok.fail("blank-detour needs both target coordinates");
    } else {
        tok.fail("unknown feature expression '" + head + "'");
    }
    tok.expect(')');
    return expr;
}

}  // namespace

FeatureSet parse_feature_file(const std::string &text) {
    FeatureSet fs;
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
        if (head == "pattern") {
            while (!tok.done()) {
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
                fs.goal_pattern.push_back(a);
            }
        } else if (head == "feature") {
            Feature f;
            f.name = tok.symbol();
            for (char c : f.name)
                if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
                    tok.fail("feature names use letters, digits and '_' only");
            std::string kind = tok.symbol();
            if (kind == "bool")
                f.kind = FeatureKind::boolean;
            else if (kind == "num")
                f.kind = FeatureKind::numeric;
            else
                tok.fail("expected bool or num");
            f.expr = parse_expr(tok);
            if (fs.index_of(f.name) >= 0)
                tok.fail("duplicate feature name '" + f.name + "'");
            fs.features.push_back(std::move(f));
        } else {
            tok.fail("expected 'feature' or 'pattern'");
        }
        if (!tok.done())
            tok.fail("trailing input");
    }
    return fs;
}

}  // namespace gpp
