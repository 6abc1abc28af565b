#include "gpp/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace gpp {

namespace {

uint64_t rand_below(std::mt19937_64 &rng, uint64_t n) {
    // unbiased and stable across platforms, unlike uniform_int_distribution
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % n;
}

std::vector<std::string> block_names(int n) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i)
        names.push_back("b" + std::to_string(i));
    return names;
}

BlockConfig canonical(BlockConfig config) {
    std::sort(config.begin(), config.end());
    return config;
}

}  // namespace

std::vector<BlockConfig> enumerate_block_configs(int num_blocks) {
    if (num_blocks < 1)
        throw Error("invalid-params: blocks must be >= 1");
    std::vector<std::string> blocks = block_names(num_blocks);
    std::sort(blocks.begin(), blocks.end());
    std::set<BlockConfig> seen;
    // every configuration is some permutation split into towers at a
    // subset of the n-1 gaps; duplicates collapse via canonical form
    do {
        for (uint32_t breaks = 0; breaks < (1u << (num_blocks - 1)); ++breaks) {
            BlockConfig config;
            std::vector<std::string> tower{blocks[0]};
            for (int i = 1; i < num_blocks; ++i) {
                if (breaks & (1u << (i - 1))) {
                    config.push_back(tower);
                    tower.clear();
                }
                tower.push_back(blocks[i]);
            }
            config.push_back(tower);
            seen.insert(canonical(config));
        }
    } while (std::next_permutation(blocks.begin(), blocks.end()));
    return std::vector<BlockConfig>(seen.begin(), seen.end());
}

uint64_t count_block_configs(int num_blocks) {
    // sum over k of Lah numbers: n!/k! * C(n-1, k-1)
    auto binom = [](int n, int k) {
        uint64_t r = 1;
        for (int i = 1; i <= k; ++i)
            r = r * (n - k + i) / i;
        return r;
    };
    uint64_t total = 0;
    uint64_t n_fact = 1;
    for (int i = 2; i <= num_blocks; ++i)
        n_fact *= i;
    uint64_t k_fact = 1;
    for (int k = 1; k <= num_blocks; ++k) {
        k_fact *= k;
        total += n_fact / k_fact * binom(num_blocks - 1, k - 1);
    }
    return total;
}

Instance make_blocksworld(const BlockConfig &config, const std::vector<Atom> &goal,
                          const std::string &name) {
    std::vector<std::string> objects;
    for (const auto &tower : config)
        for (const std::string &b : tower)
            objects.push_back(b);
    std::sort(objects.begin(), objects.end());

    InstanceBuilder builder(name, "blocksworld");
    for (const std::string &b : objects)
        builder.add_object(b);

    for (const auto &tower : config) {
        builder.add_init({"ontable", {tower.front()}});
        for (size_t i = 1; i < tower.size(); ++i)
            builder.add_init({"on", {tower[i], tower[i - 1]}});
        builder.add_init({"clear", {tower.back()}});
    }
    builder.add_init({"armempty", {}});
    for (const Atom &g : goal)
        builder.add_goal(g);

    // schemas per the classic four-operator encoding
    for (const std::string &x : objects)
        for (const std::string &y : objects)
            builder.add_action_if_consistent(
                "stack", {x, y}, {{"holding", {x}}, {"clear", {y}}},
                {{"on", {x, y}}, {"clear", {x}}, {"armempty", {}}},
                {{"holding", {x}}, {"clear", {y}}});
    for (const std::string &x : objects)
        for (const std::string &y : objects)
            builder.add_action_if_consistent(
                "unstack", {x, y},
                {{"on", {x, y}}, {"clear", {x}}, {"armempty", {}}},
                {{"holding", {x}}, {"clear", {y}}},
                {{"on", {x, y}}, {"clear", {x}}, {"armempty", {}}});
    for (const std::string &x : objects)
        builder.add_action_if_consistent(
            "pickup", {x}, {{"ontable", {x}}, {"clear", {x}}, {"armempty", {}}},
            {{"holding", {x}}},
            {{"ontable", {x}}, {"clear", {x}}, {"armempty", {}}});
    for (const std::string &x : objects)
        builder.add_action_if_consistent(
            "putdown", {x}, {{"holding", {x}}},
            {{"ontable", {x}}, {"clear", {x}}, {"armempty", {}}},
            {{"holding", {x}}});
    return builder.finish();
}

namespace {

BlockConfig config_from_rng(std::mt19937_64 &rng, int num_blocks) {
    std::vector<std::string> blocks = block_names(num_blocks);
    for (int i = num_blocks - 1; i > 0; --i)
        std::swap(blocks[i], blocks[rand_below(rng, i + 1)]);
    BlockConfig config;
    std::vector<std::string> tower;
    for (const std::string &b : blocks) {
        if (!tower.empty() && rand_below(rng, 2) == 0) {
            config.push_back(tower);
            tower.clear();
        }
        tower.push_back(b);
    }
    config.push_back(tower);
    return canonical(config);
}

std::string config_name(const std::string &prefix, const BlockConfig &config) {
    std::string name = prefix;
    for (const auto &tower : config) {
        name += "_";
        for (const std::string &b : tower)
            name += b;
    }
    return name;
}

const std::vector<std::string> *tower_of(const BlockConfig &config,
                                         const std::string &block) {
    for (const auto &tower : config)
        for (const std::string &b : tower)
            if (b == block)
                return &tower;
    return nullptr;
}

int blocks_above(const BlockConfig &config, const std::string &block) {
    const auto *tower = tower_of(config, block);
    for (size_t i = 0; i < tower->size(); ++i)
        if ((*tower)[i] == block)
            return static_cast<int>(tower->size() - 1 - i);
    return 0;
}

}  // namespace

BlockConfig random_block_config(int num_blocks, uint64_t seed) {
    if (num_blocks < 1)
        throw Error("invalid-params: blocks must be >= 1");
    std::mt19937_64 rng(seed);
    return config_from_rng(rng, num_blocks);
}

Instance make_grid(int width, int height, int start_x, int start_y, int goal_x,
                   int goal_y) {
    if (width < 1 || height < 1)
        throw Error("invalid-params: grid dimensions must be >= 1");
    auto in_range = [&](int x, int y) {
        return x >= 1 && x <= width && y >= 1 && y <= height;
    };
    if (!in_range(start_x, start_y) || !in_range(goal_x, goal_y))
        throw Error("invalid-params: start/goal outside grid");

    std::ostringstream name;
    name << "grid" << width << "x" << height << "_" << start_x << "_" << start_y
         << "_to_" << goal_x << "_" << goal_y;
    InstanceBuilder builder(name.str(), "grid");
    for (int i = 1; i <= std::max(width, height); ++i)
        builder.add_object(std::to_string(i));

    auto cell = [](int x, int y) {
        return std::vector<std::string>{std::to_string(x), std::to_string(y)};
    };
    builder.add_init({"at", cell(start_x, start_y)});
    builder.add_goal({"at", cell(goal_x, goal_y)});

    const int dx[] = {1, -1, 0, 0};
    const int dy[] = {0, 0, 1, -1};
    for (int y = 1; y <= height; ++y)
        for (int x = 1; x <= width; ++x)
            for (int d = 0; d < 4; ++d) {
                int x2 = x + dx[d], y2 = y + dy[d];
                if (!in_range(x2, y2))
                    continue;
                std::vector<std::string> args = {std::to_string(x), std::to_string(y),
                                                 std::to_string(x2),
                                                 std::to_string(y2)};
                builder.add_action("move", args, {{"at", cell(x, y)}},
                                   {{"at", cell(x2, y2)}}, {{"at", cell(x, y)}});
            }
    return builder.finish();
}

Instance make_slide3x3(uint64_t seed, int scramble) {
    std::mt19937_64 rng(seed);
    // board[y][x] = tile index 1..8, 0 for the blank; solved layout first
    int board[4][4];
    int k = 1;
    for (int y = 1; y <= 3; ++y)
        for (int x = 1; x <= 3; ++x)
            board[y][x] = k == 9 ? 0 : k, ++k;
    int bx = 3, by = 3;
    const int dx[] = {1, -1, 0, 0};
    const int dy[] = {0, 0, 1, -1};
    for (int step = 0; step < scramble; ++step) {
        int d;
        int tx, ty;
        do {
            d = static_cast<int>(rand_below(rng, 4));
            tx = bx + dx[d];
            ty = by + dy[d];
        } while (tx < 1 || tx > 3 || ty < 1 || ty > 3);
        std::swap(board[by][bx], board[ty][tx]);
        bx = tx;
        by = ty;
    }
    int goal_tile = 1 + static_cast<int>(rand_below(rng, 8));
    int gx = 1 + static_cast<int>(rand_below(rng, 3));
    int gy = 1 + static_cast<int>(rand_below(rng, 3));

    std::ostringstream name;
    name << "slide3x3_s" << seed;
    InstanceBuilder builder(name.str(), "slide3x3");
    for (int t = 1; t <= 8; ++t)
        builder.add_object("t" + std::to_string(t));
    for (int i = 1; i <= 3; ++i)
        builder.add_object(std::to_string(i));

    for (int y = 1; y <= 3; ++y)
        for (int x = 1; x <= 3; ++x) {
            if (board[y][x] == 0)
                builder.add_init({"atB", {std::to_string(x), std::to_string(y)}});
            else
                builder.add_init({"at",
                                  {"t" + std::to_string(board[y][x]),
                                   std::to_string(x), std::to_string(y)}});
        }
    builder.add_goal({"at",
                      {"t" + std::to_string(goal_tile), std::to_string(gx),
                       std::to_string(gy)}});

    for (int t = 1; t <= 8; ++t)
        for (int y = 1; y <= 3; ++y)
            for (int x = 1; x <= 3; ++x)
                for (int d = 0; d < 4; ++d) {
                    int x2 = x + dx[d], y2 = y + dy[d];
                    if (x2 < 1 || x2 > 3 || y2 < 1 || y2 > 3)
                        continue;
                    std::string tile = "t" + std::to_string(t);
                    std::string xs = std::to_string(x), ys = std::to_string(y);
                    std::string xs2 = std::to_string(x2), ys2 = std::to_string(y2);
                    builder.add_action("move", {tile, xs, ys, xs2, ys2},
                                       {{"at", {tile, xs, ys}}, {"atB", {xs2, ys2}}},
                                       {{"at", {tile, xs2, ys2}}, {"atB", {xs, ys}}},
                                       {{"at", {tile, xs, ys}}, {"atB", {xs2, ys2}}});
                }
    return builder.finish();
}

Instance generate_instance(const std::string &domain, const DomainParams &params) {
    if (domain == "blocksworld") {
        if (params.blocks < 1)
            throw Error("invalid-params: blocks must be >= 1");
        BlockConfig config = random_block_config(params.blocks, params.seed);
        return make_blocksworld(config, {{"clear", {"b1"}}},
                                "blocksworld" + std::to_string(params.blocks) + "_s" +
                                    std::to_string(params.seed));
    }
    if (domain == "qon") {
        if (params.blocks < 4)
            throw Error("invalid-params: qon needs at least 4 blocks");
        std::mt19937_64 rng(params.seed);
        BlockConfig config;
        do {
            config = config_from_rng(rng, params.blocks);
        } while (tower_of(config, "b1") == tower_of(config, "b2") ||
                 blocks_above(config, "b1") == 0 || blocks_above(config, "b2") == 0);
        return make_blocksworld(config, {{"on", {"b1", "b2"}}},
                                "qon" + std::to_string(params.blocks) + "_s" +
                                    std::to_string(params.seed));
    }
    if (domain == "qtower") {
        if (params.blocks < 4)
            throw Error("invalid-params: qtower needs at least 4 blocks");
        std::mt19937_64 rng(params.seed);
        BlockConfig config;
        do {
            config = config_from_rng(rng, params.blocks);
        } while (blocks_above(config, "b1") == 0 ||
                 tower_of(config, "b1")->front() == "b1" ||
                 tower_of(config, "b1")->size() == static_cast<size_t>(params.blocks));
        return make_blocksworld(config, {},
                                "qtower" + std::to_string(params.blocks) + "_s" +
                                    std::to_string(params.seed));
    }
    if (domain == "grid") {
        if (params.width < 1 || params.height < 1)
            throw Error("invalid-params: grid dimensions must be >= 1");
        std::mt19937_64 rng(params.seed);
        int cells = params.width * params.height;
        int start = static_cast<int>(rand_below(rng, cells));
        int goal = static_cast<int>(rand_below(rng, cells));
        return make_grid(params.width, params.height, start % params.width + 1,
                         start / params.width + 1, goal % params.width + 1,
                         goal / params.width + 1);
    }
    if (domain == "slide3x3") {
        if ((params.width != 0 && params.width != 3) ||
            (params.height != 0 && params.height != 3))
            throw Error("invalid-params: sliding puzzle is 3x3 only");
        return make_slide3x3(params.seed);
    }
    throw Error("invalid-params: unknown domain '" + domain + "'");
}

namespace {

using Bind = std::vector<std::pair<std::string, std::string>>;

void add_clear_family(Family &family, int lo, int hi) {
    for (int n = lo; n <= hi; ++n)
        for (const BlockConfig &config : enumerate_block_configs(n)) {
            if (blocks_above(config, "b1") == 0)
                continue;
            FamilyMember member;
            member.instance =
                make_blocksworld(config, {{"clear", {"b1"}}},
                                 config_name("qclear" + std::to_string(n), config));
            member.binding = Bind{{"x", "b1"}};
            family.members.push_back(std::move(member));
        }
}

Family build_qclear_le4() {
    Family family{"qclear_le4", {}};
    add_clear_family(family, 2, 4);
    return family;
}

Family build_qclear_5_7() {
    Family family{"qclear_5_7", {}};
    for (int n = 5; n <= 7; ++n)
        for (uint64_t seed = 1; seed <= 2; ++seed) {
            std::mt19937_64 rng(seed);
            BlockConfig config;
            do {
                config = config_from_rng(rng, n);
            } while (blocks_above(config, "b1") == 0);
            FamilyMember member;
            member.instance = make_blocksworld(
                config, {{"clear", {"b1"}}},
                "qclear" + std::to_string(n) + "_s" + std::to_string(seed));
            member.binding = Bind{{"x", "b1"}};
            family.members.push_back(std::move(member));
        }
    return family;
}

Family build_qon_le5() {
    Family family{"qon_le5", {}};
    for (int n = 4; n <= 5; ++n)
        for (const BlockConfig &config : enumerate_block_configs(n)) {
            if (tower_of(config, "b1") == tower_of(config, "b2"))
                continue;
            if (blocks_above(config, "b1") == 0 || blocks_above(config, "b2") == 0)
                continue;
            FamilyMember member;
            member.instance =
                make_blocksworld(config, {{"on", {"b1", "b2"}}},
                                 config_name("qon" + std::to_string(n), config));
            member.binding = Bind{{"x", "b1"}, {"y", "b2"}};
            family.members.push_back(std::move(member));
        }
    return family;
}

Family build_qtower_le5() {
    Family family{"qtower_le5", {}};
    for (int n = 4; n <= 5; ++n)
        for (const BlockConfig &config : enumerate_block_configs(n)) {
            const auto *tower = tower_of(config, "b1");
            if (blocks_above(config, "b1") == 0 || tower->front() == "b1")
                continue;
            if (tower->size() == static_cast<size_t>(n))
                continue;  // needs a block outside b1's tower
            FamilyMember member;
            member.instance = make_blocksworld(
                config, {}, config_name("qtower" + std::to_string(n), config));
            member.binding = Bind{{"x", "b1"}};
            family.members.push_back(std::move(member));
        }
    return family;
}

Family build_qmove(int max_dim) {
    Family family{"qmove_le" + std::to_string(max_dim), {}};
    for (int w = 1; w <= max_dim; ++w)
        for (int h = 1; h <= max_dim; ++h)
            for (int sy = 1; sy <= h; ++sy)
                for (int sx = 1; sx <= w; ++sx)
                    for (int gy = 1; gy <= h; ++gy)
                        for (int gx = 1; gx <= w; ++gx) {
                            FamilyMember member;
                            member.instance = make_grid(w, h, sx, sy, gx, gy);
                            member.binding = Bind{{"gx", std::to_string(gx)},
                                                  {"gy", std::to_string(gy)}};
                            family.members.push_back(std::move(member));
                        }
    return family;
}

Family build_qslide(const std::string &name, uint64_t num_seeds) {
    Family family{name, {}};
    for (uint64_t seed = 1; seed <= num_seeds; ++seed) {
        FamilyMember member;
        member.instance = make_slide3x3(seed);
        const Atom &goal = member.instance.goal_atoms().front();
        member.binding = Bind{{"t", goal.args[0]},
                              {"gx", goal.args[1]},
                              {"gy", goal.args[2]}};
        family.members.push_back(std::move(member));
    }
    return family;
}

}  // namespace

Family build_family(const std::string &name) {
    if (name == "qclear_le4")
        return build_qclear_le4();
    if (name == "qclear_5_7")
        return build_qclear_5_7();
    if (name == "qon_le5")
        return build_qon_le5();
    if (name == "qtower_le5")
        return build_qtower_le5();
    if (name == "qmove_le6")
        return build_qmove(6);
    if (name == "qmove_le3")
        return build_qmove(3);
    if (name == "qslide_s500")
        return build_qslide("qslide_s500", 512);
    if (name == "qslide_s8")
        return build_qslide("qslide_s8", 8);
    if (name == "qslide_s3")
        return build_qslide("qslide_s3", 3);
    throw Error("unknown family '" + name + "'");
}

namespace {

bool glob_match(const std::string &pattern, const std::string &text, size_t p = 0,
                size_t t = 0) {
    while (p < pattern.size() && pattern[p] != '*') {
        if (t >= text.size() || pattern[p] != text[t])
            return false;
        ++p;
        ++t;
    }
    if (p == pattern.size())
        return t == text.size();
    for (size_t skip = t; skip <= text.size(); ++skip)
        if (glob_match(pattern, text, p + 1, skip))
            return true;
    return false;
}

}  // namespace

Family build_family_glob(const std::string &pattern) {
    if (is_family_name(pattern))
        return build_family(pattern);
    Family merged{pattern, {}};
    for (const std::string &name : family_names())
        if (glob_match(pattern, name)) {
            Family part = build_family(name);
            for (FamilyMember &member : part.members)
                merged.members.push_back(std::move(member));
        }
    if (merged.members.empty())
        throw Error("no family matches '" + pattern + "'");
    return merged;
}

bool is_family_name(const std::string &name) {
    for (const std::string &f : family_names())
        if (f == name)
            return true;
    return false;
}

std::vector<std::string> family_names() {
    return {"qclear_le4", "qclear_5_7", "qon_le5",    "qtower_le5", "qmove_le6",
            "qmove_le3",  "qslide_s500", "qslide_s8", "qslide_s3"};
}

}  // namespace gpp
