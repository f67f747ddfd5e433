#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "forge/perm.hpp"
#include "forge/word.hpp"

namespace forge {

// A finite permutation group with its full element table enumerated.
// elements[0] is the identity; index_of inverts the table.
struct FiniteGroupRep {
    size_t degree = 0;
    std::vector<Perm> gens;
    std::vector<Perm> gen_invs;
    std::vector<Perm> elements;
    std::unordered_map<Perm, uint32_t, PermHash> index_of;

    size_t size() const { return elements.size(); }
};

// Records that a word set was mapped injectively into a group: the words,
// their element indices (parallel to `separated`), and how the map was found.
struct SeparationCertificate {
    std::vector<Word> separated;
    std::vector<uint32_t> witness;
    std::string method;
};

// How separate() should look for its group.
struct SeparationStrategy {
    enum class Kind { Ball, Random };
    Kind kind = Kind::Ball;
    int radius = 1;       // Ball: act on reduced words of length <= radius
    size_t degree = 0;    // Random: point-set size for the candidate maps
    uint64_t seed = 0;    // Random: draw seed
    int tries = 64;       // Random: draw budget before giving up

    static SeparationStrategy ball(int r);
    static SeparationStrategy random(size_t m, uint64_t seed, int tries = 64);
};

// Generators acting on the radius-r ball of reduced words over k letters.
// points is the ball in length-then-lex order; base indexes the empty word.
struct BallAction {
    size_t degree = 0;
    std::vector<Word> points;
    size_t base = 0;
    std::vector<Perm> gens;
    std::vector<Perm> gen_invs;
};

// Breadth-first closure of a generator set into the full element table.
// Listing order: identity, then layer by layer, each layer sorted by
// point-image so the result does not depend on generator order.
// Throws CapExceeded once the table would outgrow cap.
std::vector<Perm> closure(size_t degree, const std::vector<Perm>& gens, size_t cap);

// Closure plus index: the ready-to-use group object.
FiniteGroupRep make_group(size_t degree, std::vector<Perm> gens, size_t cap);

// Generator i sends a ball point w to reduce(g_i * w) when that stays in the
// ball; leftover sources are paired with leftover targets in word order, so
// each table is a genuine permutation. Applying the letters of any reduced
// word of length <= r to the base point lands on the point named by the word.
BallAction ball_action(int k, int r);

// Find a finite group whose evaluation map is injective on S together with
// the empty word, and certify it. Throws CapExceeded if the group table
// outgrows cap, SearchExhausted if the strategy's budget runs out without a
// valid map.
std::pair<FiniteGroupRep, SeparationCertificate>
separate(int k, const std::vector<Word>& S, const SeparationStrategy& strategy, size_t cap);

// Left multiplication by elements[g] as a permutation of element indices.
// Fixed-point-free whenever g is not the identity.
Perm left_mult_table(const FiniteGroupRep& G, uint32_t g);

} // namespace forge
