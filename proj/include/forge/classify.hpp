#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "forge/geodesic.hpp"
#include "forge/node.hpp"
#include "forge/perm.hpp"
#include "forge/tower.hpp"

namespace forge {

// Fixed-width bit coding of a whole-universe permutation: the binary
// expansion of every image id, element by element in global order.
struct PermCode {
    std::vector<uint8_t> bits;
};

// Bits per image id: the width of universe_size - 1.
int code_width(uint64_t universe_size);

PermCode encode(const Tower& t, const Perm& f);
Perm decode(const Tower& t, const PermCode& code);

// The branch a permutation names: the first `depth` bits of its code.
Node branch_code(const Tower& t, const Perm& f);

// The branch-indexed permutation named by f's code.
Perm f1(const Tower& t, const Perm& f);

// A family extracted from the per-level survivor sets: either one member per
// level with pairwise-incomparable labels at one position (incomparable =
// true), or a positive-fraction subset per level sharing length, signs and
// whole label tuples (incomparable = false).
struct ExtractedFamily {
    bool incomparable = false;
    std::vector<int> levels;
    std::map<int, std::vector<uint64_t>> members;  // global ids per level
    uint32_t l_star = 0;                           // shared decomposition length
    int l_star_star = -1;                          // witness position, -1 when unused
    std::vector<int> signs;                        // shared sign vector
    std::map<int, std::vector<Node>> labels;       // per level: label per position
    std::vector<int> comparability;                // per position: 1 constant-true, 0 constant-false
    std::map<int, uint64_t> fraction_witness;      // per level: ceil(|v_n| / |members_n|)
};

// Verdicts are observed facts about levels 0..horizon, not limits: "the
// deepest level still shows X" stands in for "X happens unboundedly often".
struct ClassifierReport {
    int horizon = 0;
    uint64_t fix_count = 0;
    // 1 iff fixed points persist at the deepest level.
    int b11 = 0;
    // Levels n where f pushes some marked element of the block at eta1|n
    // into a strictly later block.
    std::vector<int> escape_levels;
    int b12 = 0;
    // First level past the last observed escape.
    int b13 = 0;
    // Per level n: marked elements of the block at eta1|n that f keeps
    // inside that block, their minimal decompositions, and the multiset of
    // decomposition lengths.
    std::map<int, std::vector<uint64_t>> v;
    std::map<int, std::vector<Geodesic>> geodesics;
    std::map<int, std::vector<uint32_t>> lvals;
    // 1 iff the deepest level's longest decomposition strictly exceeds every
    // shallower level's.
    int b14 = 0;
    uint32_t b15 = 0;
    // 1 iff some level holds two survivors whose labels at one shared
    // position differ only in their last bit.
    int b16 = 0;
    // Filled by extract_families.
    bool family_found = false;
    std::string family_note;
    ExtractedFamily family;
    // 1 iff the extracted per-set family has a constant-false comparability
    // position; meaningful only after extract_families.
    int b26 = 0;
    int b26p = 1;
};

ClassifierReport classify(const Tower& t, const Perm& f, const Node& eta1);

// Runs the family extraction the report's flags call for and computes the
// comparability verdicts. Throws FamilyNotFound only out of pick-level
// helpers; here thin data is reported via family_found/family_note.
ClassifierReport extract_families(const Tower& t, const Perm& f, const Node& eta1,
                                  ClassifierReport report);

struct HomogeneousSubset {
    std::vector<size_t> indices;
    int color = 0;
};

// Monochromatic subset extraction: a pivot chain first, then, for pair
// colorings falling short, an exhaustive lexicographic completion up to the
// guaranteed size floor(log_colors(items)) - 1.
HomogeneousSubset homogenize_pairs(size_t items, int colors,
                                   const std::function<int(size_t, size_t)>& coloring);
HomogeneousSubset homogenize_triples(size_t items, int colors,
                                     const std::function<int(size_t, size_t, size_t)>& coloring);

// `PERM <n>` header then one `<gid> <gid>` line per element; must be a
// bijection on ids 0..n-1 with n matching the expected universe.
Perm load_perm_file(const std::string& path, uint64_t universe_size);
void save_perm_file(const Perm& f, const std::string& path);

} // namespace forge
