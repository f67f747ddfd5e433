#pragma once

#include <cstdint>
#include <vector>

#include "forge/perm.hpp"
#include "forge/word.hpp"

namespace forge {

// The twisted-cyclic group used for tower levels: elements (x, j) with
// x mod P, j mod M, multiplied as (x1,j1)(x2,j2) = (x1 + u^j1 x2, j1 + j2).
// Local element index is j*P + x; the identity (0,0) is index 0. u has
// multiplicative order M mod P, so every element with j != 0 has order M.
// M = 1 (plain cyclic) serves single-generator levels; M = 5 all others.
struct StructGroup {
    uint64_t P = 2;
    uint64_t M = 1;
    uint64_t u = 1;
    std::vector<uint64_t> upow;     // u^j mod P, j < M
    std::vector<uint64_t> upow_inv; // u^-j mod P, j < M

    uint64_t size() const { return P * M; }
    uint64_t index(uint64_t x, uint64_t j) const { return j * P + x; }
    uint64_t x_of(uint64_t e) const { return e % P; }
    uint64_t j_of(uint64_t e) const { return e / P; }
    uint64_t mul(uint64_t e1, uint64_t e2) const;
    uint64_t inv(uint64_t e) const;
};

StructGroup make_struct_group(uint64_t P, uint64_t M);

// A generator image (v, j).
struct StructGen {
    uint64_t v = 0;
    uint64_t j = 0;
};

// One separated level: the group, the k generator images (gens[0] is always
// (1, 0)), and how the search got there.
struct StructLevel {
    StructGroup G;
    std::vector<StructGen> gens;
    uint64_t seed = 0;   // seed the search ran with (recorded in certificates)
    uint64_t draws = 0;  // attempts consumed across all group sizes tried
    uint64_t weight = 0; // expected-collision weight of the final group size
};

// Element index of the i-th generator image.
uint64_t struct_gen_elem(const StructLevel& L, size_t i);

// Element index of the n-th marker word image: a^2n b a^-2n over generators
// 0 and 1 when there are at least two generators, a^n otherwise. n >= 1.
// Even powers keep every commutator of two short words off the marker
// lattice, so no short-word identity of the group family can force a
// collision between marker translates.
uint64_t struct_y_elem(const StructLevel& L, uint64_t n);

// The marker word itself, as a free word (matches struct_y_elem's image).
Word struct_y_word(int k, uint64_t n);

// Left multiplication by gens[i] as a permutation of local element indices.
Perm struct_left_table(const StructLevel& L, size_t i);

// Find a group in the family whose evaluation map is injective on
// S union {empty}, where S = Lambda ∪ Y ∪ Lambda·Y, Lambda = nontrivial
// reduced words of length <= lsep over k generators and Y = the marker words
// y_1..y_N. Generator twists are fixed by exact collision-weight
// minimization; translation parts are redrawn from `seed` until a draw has
// no collisions, walking the group size upward on budget exhaustion.
// Throws CapExceeded when the group size needed exceeds max_group,
// SearchExhausted when escalation stalls, ScheduleInfeasible when even the
// smallest admissible group is over the cap.
StructLevel struct_separate(int k, int lsep, uint64_t N, uint64_t max_group, uint64_t seed);

// Exhaustive re-verification: hashes the images of every member of
// S union {empty} (free-word duplicates deduplicated) and checks they are
// pairwise distinct. Independent of the window bookkeeping in the search.
bool struct_certify(const StructLevel& L, int k, int lsep, uint64_t N);

} // namespace forge
