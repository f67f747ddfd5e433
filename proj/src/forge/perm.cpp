#include "forge/perm.hpp"

#include <cassert>

namespace forge {

Perm identity_perm(size_t n) {
    Perm p(n);
    for (size_t i = 0; i < n; ++i) p[i] = static_cast<uint32_t>(i);
    return p;
}

bool is_permutation(const Perm& p) {
    std::vector<bool> seen(p.size(), false);
    for (uint32_t v : p) {
        if (v >= p.size() || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

Perm compose(const Perm& outer, const Perm& inner) {
    assert(outer.size() == inner.size());
    Perm out(inner.size());
    for (size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
    return out;
}

Perm inverse_perm(const Perm& p) {
    Perm out(p.size());
    for (size_t i = 0; i < p.size(); ++i) out[p[i]] = static_cast<uint32_t>(i);
    return out;
}

size_t count_fixed_points(const Perm& p) {
    size_t n = 0;
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] == i) ++n;
    }
    return n;
}

bool fixed_point_free(const Perm& p) {
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] == i) return false;
    }
    return true;
}

uint32_t apply_word(const Word& w, const std::vector<Perm>& gens,
                    const std::vector<Perm>& gen_invs, uint32_t x) {
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        const Perm& table = (it->sign > 0) ? gens[it->gen] : gen_invs[it->gen];
        x = table[x];
    }
    return x;
}

Perm word_to_perm(const Word& w, const std::vector<Perm>& gens,
                  const std::vector<Perm>& gen_invs, size_t degree) {
    Perm out(degree);
    for (size_t i = 0; i < degree; ++i) {
        out[i] = apply_word(w, gens, gen_invs, static_cast<uint32_t>(i));
    }
    return out;
}

} // namespace forge
