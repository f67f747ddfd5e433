#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "forge/node.hpp"
#include "forge/perm.hpp"
#include "forge/tower.hpp"

namespace forge {

// One letter of a word over branch-indexed permutations. The branch is a
// finite 0/1 prefix; against a tower it must be at least as long as the tower
// is deep, since each block reads exactly the first lg(block) bits.
struct BranchLetter {
    Node branch;
    int sign = +1;

    friend bool operator==(const BranchLetter& a, const BranchLetter& b) {
        return a.branch == b.branch && a.sign == b.sign;
    }
    friend bool operator!=(const BranchLetter& a, const BranchLetter& b) { return !(a == b); }
};

struct BranchWord {
    std::vector<BranchLetter> letters;

    size_t size() const { return letters.size(); }
    bool empty() const { return letters.empty(); }
};

// No adjacent pair with the same branch bits and opposite signs.
bool branch_word_reduced(const BranchWord& w);

// Token format: "b:<bits>:<+|->", whitespace-separated; "b:-:<+|->" names the
// empty branch. An empty string parses to the empty word.
BranchWord parse_branch_word(const std::string& text);
std::string branch_word_str(const BranchWord& w);

// Least truncation length at which the word's distinct branches become
// pairwise distinct (0 when the word uses at most one branch).
int separation_depth(const BranchWord& w);

// Apply the permutation named by branch nu to one global element: the block
// of x is acted on by its generator labeled nu truncated to the block depth.
// The result stays in the block of x.
uint64_t gstar_apply(const Tower& t, const Node& nu, uint64_t x, int sign = +1);

// Letter-by-letter application; the rightmost letter acts first.
uint64_t eval_word(const Tower& t, const BranchWord& w, uint64_t x);

// The whole-universe table of the word's action.
Perm word_perm(const Tower& t, const BranchWord& w);

struct FixedPointReport {
    uint64_t total = 0;
    std::vector<uint64_t> per_level;  // aligned with tower.levels
    // The empty word fixes everything; its confinement depth is undefined.
    bool trivial_word = false;
    bool has_confinement = false;
    // Least L such that every node of length >= L holds zero fixed points.
    // depth+1 means fixed points persist at the deepest built level.
    int confinement_depth = 0;
};

// Exact census by evaluating the word on every universe element.
FixedPointReport fixed_points(const Tower& t, const BranchWord& w);

// True iff every fixed point of the word lies in a block of depth strictly
// below max(letter count, separation depth of the word's branches). Requires
// a reduced nontrivial word.
bool confinement_check(const Tower& t, const BranchWord& w);

} // namespace forge
