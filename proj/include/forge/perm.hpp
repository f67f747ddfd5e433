#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "forge/word.hpp"

namespace forge {

// A permutation of {0, ..., n-1} stored as its image table.
using Perm = std::vector<uint32_t>;

Perm identity_perm(size_t n);
bool is_permutation(const Perm& p);

// compose(outer, inner)[x] = outer[inner[x]].
Perm compose(const Perm& outer, const Perm& inner);
Perm inverse_perm(const Perm& p);

size_t count_fixed_points(const Perm& p);
bool fixed_point_free(const Perm& p);

// Applies a word to one point. The rightmost letter acts first; this is
// the composition convention used by every module.
uint32_t apply_word(const Word& w, const std::vector<Perm>& gens,
                    const std::vector<Perm>& gen_invs, uint32_t x);

// Image table of a whole word under the same convention.
Perm word_to_perm(const Word& w, const std::vector<Perm>& gens,
                  const std::vector<Perm>& gen_invs, size_t degree);

// FNV-1a over the image table, for hash maps keyed by permutation.
struct PermHash {
    size_t operator()(const Perm& p) const {
        uint64_t h = 1469598103934665603ull;
        for (uint32_t v : p) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
    }
};

} // namespace forge
