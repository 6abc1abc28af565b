#ifndef GPP_GENERATORS_HPP
#define GPP_GENERATORS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gpp/strips.hpp"

/*
  Parameterized instance generators for the three bundled domains
  (Blocksworld, rectangular grids, 3x3 sliding puzzle), plus the named
  desk-scale instance families used by the verification commands.
  Everything here is deterministic: fixed parameters and seeds always
  produce identical instances.
*/

namespace gpp {

// A blocks configuration is a set of towers, each listed bottom to top.
using BlockConfig = std::vector<std::vector<std::string>>;

// All distinct configurations of blocks b1..bn (towers are unordered);
// returned in a canonical sorted order.
std::vector<BlockConfig> enumerate_block_configs(int num_blocks);

// Independent combinatorial count of configurations (sum of Lah numbers);
// used by tests as an oracle against the enumerator and BFS.
uint64_t count_block_configs(int num_blocks);

Instance make_blocksworld(const BlockConfig &config, const std::vector<Atom> &goal,
                          const std::string &name);

// Seeded random configuration of n blocks.
BlockConfig random_block_config(int num_blocks, uint64_t seed);

// n x m grid with cells (1,1)..(n,m), atoms at(x,y), unit moves.
Instance make_grid(int width, int height, int start_x, int start_y, int goal_x,
                   int goal_y);

// 3x3 sliding puzzle: tiles t1..t8 with atoms at(t,x,y) and atB(x,y).
// The board is scrambled from the solved layout by `scramble` random legal
// moves, so every generated instance is solvable. The goal asks for a
// seeded choice of tile and target cell.
Instance make_slide3x3(uint64_t seed, int scramble = 80);

struct DomainParams {
    int blocks = 0;
    int width = 0, height = 0;
    uint64_t seed = 0;
};

// Generic entry point used by the CLI: domain is one of
// blocksworld | grid | slide3x3. Throws Error on invalid parameters.
Instance generate_instance(const std::string &domain, const DomainParams &params);

// A family pairs instances with their goal-parameter bindings.
struct FamilyMember {
    Instance instance;
    std::vector<std::pair<std::string, std::string>> binding;
};

struct Family {
    std::string name;
    std::vector<FamilyMember> members;
};

// Named families. Blocksworld families are exhaustive over configurations:
//   qclear_le4   goal clear(b1), 2..4 blocks, >=1 block above b1 initially
//   qclear_5_6   seeded samples at 5 and 6 blocks (same constraints)
//   qon_le5      goal on(b1,b2), 4..5 blocks, b1/b2 in different towers
//                with blocks above both, arm empty
//   qtower_le5   4..5 blocks, b1 mid-tower (above and below nonempty) and
//                at least one block outside b1's tower; no goal atoms
//   qmove_le6    all start/goal pairs over all grids up to 6x6
//   qmove_le3    all start/goal pairs over all grids up to 3x3
//   qslide_s500  512 seeded 3x3 sliding puzzle instances
//   qslide_s8    8 seeded instances (verification-sized)
Family build_family(const std::string &name);

// Accepts an exact family name or a glob ('*' wildcards, e.g. "qclear_*")
// and returns the union of all matching families.
Family build_family_glob(const std::string &pattern);

bool is_family_name(const std::string &name);
std::vector<std::string> family_names();

}  // namespace gpp

#endif
