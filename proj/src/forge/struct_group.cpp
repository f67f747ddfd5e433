#include "forge/struct_group.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "forge/errors.hpp"
#include "forge/rng.hpp"

namespace forge {

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t P) { return a * b % P; }

uint64_t powmod(uint64_t g, uint64_t e, uint64_t P) {
    uint64_t r = 1 % P;
    g %= P;
    while (e) {
        if (e & 1) r = mulmod(r, g, P);
        g = mulmod(g, g, P);
        e >>= 1;
    }
    return r;
}

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

uint64_t next_prime(uint64_t n) {
    while (!is_prime(n)) ++n;
    return n;
}

uint64_t next_prime_1mod5(uint64_t n) {
    if (n < 11) n = 11;
    while (n % 5 != 1 || !is_prime(n)) ++n;
    return n;
}

} // namespace

uint64_t StructGroup::mul(uint64_t e1, uint64_t e2) const {
    uint64_t x = (e1 % P + mulmod(upow[e1 / P], e2 % P, P)) % P;
    uint64_t j = e1 / P + e2 / P;
    if (j >= M) j -= M;
    return j * P + x;
}

uint64_t StructGroup::inv(uint64_t e) const {
    uint64_t x = e % P, j = e / P;
    uint64_t xi = (P - mulmod(upow_inv[j], x, P)) % P;
    return ((M - j) % M) * P + xi;
}

StructGroup make_struct_group(uint64_t P, uint64_t M) {
    assert(M == 1 || M == 5);
    assert(M == 1 || P % 5 == 1);
    StructGroup G;
    G.P = P;
    G.M = M;
    G.u = 1;
    if (M > 1) {
        for (uint64_t g = 2; ; ++g) {
            uint64_t u = powmod(g, (P - 1) / M, P);
            if (u != 1) {
                G.u = u;
                break;
            }
        }
    }
    G.upow.resize(M);
    G.upow_inv.resize(M);
    G.upow[0] = 1;
    for (uint64_t j = 1; j < M; ++j) G.upow[j] = mulmod(G.upow[j - 1], G.u, P);
    for (uint64_t j = 0; j < M; ++j) G.upow_inv[j] = G.upow[(M - j) % M];
    return G;
}

uint64_t struct_gen_elem(const StructLevel& L, size_t i) {
    return L.G.index(L.gens[i].v % L.G.P, L.gens[i].j);
}

Word struct_y_word(int k, uint64_t n) {
    Word w{k, {}};
    if (k >= 2) {
        for (uint64_t i = 0; i < 2 * n; ++i) w.letters.push_back(Letter{0, +1});
        w.letters.push_back(Letter{1, +1});
        for (uint64_t i = 0; i < 2 * n; ++i) w.letters.push_back(Letter{0, -1});
    } else {
        for (uint64_t i = 0; i < n; ++i) w.letters.push_back(Letter{0, +1});
    }
    return w;
}

uint64_t struct_y_elem(const StructLevel& L, uint64_t n) {
    const StructGroup& G = L.G;
    if (L.gens.size() < 2) return G.index(n % G.P, 0);
    uint64_t jb = L.gens[1].j;
    uint64_t step = 2 * (1 + G.P - G.upow[jb]) % G.P;
    uint64_t x = (L.gens[1].v + mulmod(n % G.P, step, G.P)) % G.P;
    return G.index(x, jb);
}

Perm struct_left_table(const StructLevel& L, size_t i) {
    const StructGroup& G = L.G;
    uint64_t g = struct_gen_elem(L, i);
    Perm table(G.size());
    for (uint64_t e = 0; e < G.size(); ++e) {
        table[e] = static_cast<uint32_t>(G.mul(g, e));
    }
    return table;
}

namespace {

// Static per-level search data: the word list (index 0 = empty word), twist
// sums per word, the per-twist buckets, and the free-equality catalog of
// products that reduce back into the word list.
struct SearchPlan {
    int k = 0;
    int lsep = 0;
    uint64_t N = 0;
    std::vector<Word> words;                // [0] = empty
    std::vector<uint64_t> jsum;             // per word, mod 5
    std::vector<std::vector<uint32_t>> bucket;
    uint64_t jb = 0;                        // twist of generator 1
    std::vector<uint64_t> jassign;          // twist per generator (jassign[0] = 0)
    std::unordered_set<uint64_t> catalog;   // pack(w, w2): w == reduce(w2 * y_1)
    uint64_t weight = 0;

    static uint64_t pack(uint32_t w, uint32_t w2) { return (uint64_t{w} << 32) | w2; }
};

uint64_t word_jsum(const Word& w, const std::vector<uint64_t>& jassign) {
    uint64_t j = 0;
    for (const Letter& l : w.letters) {
        uint64_t lj = jassign[static_cast<size_t>(l.gen)];
        j += (l.sign > 0) ? lj : (5 - lj) % 5;
    }
    return j % 5;
}

SearchPlan make_plan(int k, int lsep, uint64_t N) {
    SearchPlan plan;
    plan.k = k;
    plan.lsep = lsep;
    plan.N = N;
    plan.words.push_back(Word{k, {}});
    if (lsep >= 1) {
        auto lambda = enumerate_words(k, lsep);
        plan.words.insert(plan.words.end(), lambda.begin(), lambda.end());
    }

    // Fix generator twists by exact minimization of the expected-collision
    // weight: same-twist word pairs admit 2N-1 bad values each, twist-offset
    // pairs admit N. Ties break to the lexicographically least assignment.
    size_t free_gens = static_cast<size_t>(k) - 1;
    std::vector<uint64_t> trial(free_gens, 1);
    std::vector<uint64_t> best;
    uint64_t best_weight = UINT64_MAX;
    std::vector<uint64_t> assign(static_cast<size_t>(k), 0);
    while (true) {
        for (size_t i = 0; i < free_gens; ++i) assign[i + 1] = trial[i];
        uint64_t c[5] = {0, 0, 0, 0, 0};
        for (const Word& w : plan.words) ++c[word_jsum(w, assign)];
        uint64_t same = 0, offset = 0;
        uint64_t jb = assign[1];
        for (int j = 0; j < 5; ++j) {
            same += c[j] * (c[j] - 1) / 2;
            offset += c[(j + jb) % 5] * c[j];
        }
        uint64_t weight = same * (2 * N - 1) + offset * N;
        if (weight < best_weight) {
            best_weight = weight;
            best = trial;
        }
        size_t pos = free_gens;
        while (pos > 0 && trial[pos - 1] == 4) trial[--pos] = 1;
        if (pos == 0) break;
        ++trial[pos - 1];
    }
    plan.jassign.assign(static_cast<size_t>(k), 0);
    for (size_t i = 0; i < free_gens; ++i) plan.jassign[i + 1] = best[i];
    plan.jb = plan.jassign[1];
    plan.weight = best_weight;

    plan.jsum.resize(plan.words.size());
    plan.bucket.assign(5, {});
    for (size_t w = 0; w < plan.words.size(); ++w) {
        plan.jsum[w] = word_jsum(plan.words[w], plan.jassign);
        plan.bucket[plan.jsum[w]].push_back(static_cast<uint32_t>(w));
    }

    // Products w2 * y_1 that reduce back into the word list are the same free
    // word twice in the separation set; their (forced) collisions are benign.
    std::map<Word, uint32_t, bool (*)(const Word&, const Word&)> index(word_less);
    for (size_t w = 0; w < plan.words.size(); ++w) {
        index.emplace(plan.words[w], static_cast<uint32_t>(w));
    }
    Word y1 = struct_y_word(k, 1);
    for (size_t w2 = 1; w2 < plan.words.size(); ++w2) {
        Word r = concat(plan.words[w2], y1);
        auto it = index.find(r);
        if (it != index.end()) {
            plan.catalog.insert(SearchPlan::pack(it->second, static_cast<uint32_t>(w2)));
        }
    }
    return plan;
}

// Per-group-size constants.
struct Trial {
    StructGroup G;
    uint64_t step = 0;      // marker stride 2*(1 - u^jb) mod P
    uint64_t step_inv = 0;
    std::vector<uint64_t> mult;  // u^-j * step^-1 per twist j
};

Trial make_trial(uint64_t P, const SearchPlan& plan) {
    Trial t;
    t.G = make_struct_group(P, 5);
    t.step = 2 * (1 + P - t.G.upow[plan.jb]) % P;
    t.step_inv = powmod(t.step, P - 2, P);
    t.mult.resize(5);
    for (int j = 0; j < 5; ++j) t.mult[j] = mulmod(t.G.upow_inv[j], t.step_inv, P);
    return t;
}

// One draw: translation parts for generators 1..k-1. When `trips` is null,
// returns at the first collision; otherwise records every (pair, value)
// collision so two recorded draws can expose draw-independent collisions.
bool check_draw(const SearchPlan& plan, const Trial& t, const std::vector<uint64_t>& v,
                std::vector<std::pair<uint64_t, uint64_t>>* trips) {
    const StructGroup& G = t.G;
    const uint64_t P = G.P;
    const uint64_t N = plan.N;
    bool ok = true;

    uint64_t letter[16][2];
    for (int g = 0; g < plan.k; ++g) {
        uint64_t e = G.index(g == 0 ? 1 : v[static_cast<size_t>(g)],
                             plan.jassign[static_cast<size_t>(g)]);
        letter[g][0] = e;
        letter[g][1] = G.inv(e);
    }

    std::vector<uint64_t> ximg(plan.words.size());
    for (size_t w = 0; w < plan.words.size(); ++w) {
        uint64_t acc = 0;
        for (const Letter& l : plan.words[w].letters) {
            acc = G.mul(acc, letter[l.gen][l.sign > 0 ? 0 : 1]);
        }
        ximg[w] = acc % P;
    }

    uint64_t c0 = mulmod(v[1] % P, t.step_inv, P);

    for (int j = 0; j < 5; ++j) {
        const auto& b = plan.bucket[j];
        for (size_t i = 0; i < b.size(); ++i) {
            for (size_t l = i + 1; l < b.size(); ++l) {
                uint64_t d = (ximg[b[i]] + P - ximg[b[l]]) % P;
                if (d == 0) {
                    if (!trips) return false;
                    trips->emplace_back(SearchPlan::pack(b[i], b[l]), P);
                    ok = false;
                    continue;
                }
                uint64_t delta = mulmod(d, t.mult[j], P);
                if (delta <= N - 1 || delta >= P - (N - 1)) {
                    if (!trips) return false;
                    trips->emplace_back(SearchPlan::pack(b[i], b[l]), delta);
                    ok = false;
                }
            }
        }
    }

    for (int j = 0; j < 5; ++j) {
        const auto& from = plan.bucket[j];                      // w2 candidates
        const auto& to = plan.bucket[(j + plan.jb) % 5];        // w candidates
        for (uint32_t w2 : from) {
            for (uint32_t w : to) {
                uint64_t d = (ximg[w] + P - ximg[w2]) % P;
                uint64_t nstar = (mulmod(d, t.mult[j], P) + P - c0) % P;
                if (nstar >= 1 && nstar <= N) {
                    if (nstar == 1 && plan.catalog.count(SearchPlan::pack(w, w2))) continue;
                    if (!trips) return false;
                    trips->emplace_back(SearchPlan::pack(w, w2) | (uint64_t{1} << 63), nstar);
                    ok = false;
                }
            }
        }
    }
    return ok;
}

// A group size is dead when some collision does not depend on the drawn
// translations (it then recurs with the same value in independent draws).
bool size_is_dead(const SearchPlan& plan, const Trial& t, uint64_t seed) {
    Rng probe(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::pair<uint64_t, uint64_t>> first, second;
    std::vector<uint64_t> v(static_cast<size_t>(plan.k), 0);
    for (size_t g = 1; g < v.size(); ++g) v[g] = probe.below(t.G.P);
    check_draw(plan, t, v, &first);
    for (size_t g = 1; g < v.size(); ++g) v[g] = probe.below(t.G.P);
    check_draw(plan, t, v, &second);
    if (first.empty() || second.empty()) return false;
    std::sort(first.begin(), first.end());
    for (const auto& trip : second) {
        if (std::binary_search(first.begin(), first.end(), trip)) return true;
    }
    return false;
}

StructLevel assemble(const SearchPlan& plan, const Trial& t, const std::vector<uint64_t>& v,
                     uint64_t seed, uint64_t draws) {
    StructLevel L;
    L.G = t.G;
    L.gens.resize(static_cast<size_t>(plan.k));
    L.gens[0] = StructGen{1, 0};
    for (size_t g = 1; g < L.gens.size(); ++g) {
        L.gens[g] = StructGen{v[g], plan.jassign[g]};
    }
    L.seed = seed;
    L.draws = draws;
    L.weight = plan.weight;
    return L;
}

StructLevel separate_cyclic(int lsep, uint64_t N, uint64_t max_group, uint64_t seed) {
    uint64_t need = std::max<uint64_t>(2, N + 2 * static_cast<uint64_t>(lsep) + 1);
    uint64_t P = next_prime(need);
    if (P > max_group) {
        throw ScheduleInfeasible("single-generator level needs " + std::to_string(P) +
                                 " elements, cap " + std::to_string(max_group));
    }
    StructLevel L;
    L.G = make_struct_group(P, 1);
    L.gens = {StructGen{1, 0}};
    L.seed = seed;
    L.weight = 0;
    if (!struct_certify(L, 1, lsep, N)) {
        throw Unreachable("cyclic level failed its own certificate");
    }
    return L;
}

} // namespace

StructLevel struct_separate(int k, int lsep, uint64_t N, uint64_t max_group, uint64_t seed) {
    assert(k >= 1 && k <= 16);
    assert(N >= 1);
    assert(lsep >= 0);
    if (lsep > 2) {
        throw CapExceeded("separation horizon " + std::to_string(lsep) +
                          " unsupported (free-equality catalog covers horizon <= 2)");
    }
    if (k == 1) return separate_cyclic(lsep, N, max_group, seed);

    SearchPlan plan = make_plan(k, lsep, N);
    uint64_t floor_P = std::max<uint64_t>(2 * N + 1, plan.weight / 9);
    uint64_t P = next_prime_1mod5(floor_P);
    if (5 * P > max_group) {
        throw ScheduleInfeasible("level needs at least " + std::to_string(5 * P) +
                                 " elements, cap " + std::to_string(max_group));
    }

    Rng rng(seed);
    uint64_t draws = 0;
    int escalations = 0;
    std::vector<uint64_t> v(static_cast<size_t>(k), 0);
    while (true) {
        if (5 * P > max_group) {
            throw CapExceeded("separation search escalated past the group cap " +
                              std::to_string(max_group));
        }
        Trial t = make_trial(P, plan);
        if (size_is_dead(plan, t, seed)) {
            P = next_prime_1mod5(P + 1);
            continue;
        }
        double tau = static_cast<double>(plan.weight) / static_cast<double>(P);
        auto budget = static_cast<uint64_t>(60.0 * std::exp(std::min(tau, 14.0)));
        budget = std::clamp<uint64_t>(budget, 2000, 1500000);
        for (uint64_t attempt = 0; attempt < budget; ++attempt) {
            ++draws;
            for (size_t g = 1; g < v.size(); ++g) v[g] = rng.below(P);
            if (!check_draw(plan, t, v, nullptr)) continue;
            StructLevel L = assemble(plan, t, v, seed, draws);
            if (struct_certify(L, k, lsep, N)) return L;
        }
        P = next_prime_1mod5(P + P / 2);
        if (++escalations > 40) {
            throw SearchExhausted("no separating draw after " + std::to_string(draws) +
                                  " attempts up to group size " + std::to_string(5 * P));
        }
    }
}

bool struct_certify(const StructLevel& L, int k, int lsep, uint64_t N) {
    const StructGroup& G = L.G;
    if (k == 1) {
        // Every member of the separation set is a power of the generator with
        // exponent in [-lsep, N+lsep]; injectivity is exact when the group
        // order exceeds that exponent range.
        return G.P >= N + 2 * static_cast<uint64_t>(lsep) + 1 && L.gens.size() == 1 &&
               L.gens[0].v % G.P == 1;
    }

    std::vector<Word> words{Word{k, {}}};
    if (lsep >= 1) {
        auto lambda = enumerate_words(k, lsep);
        words.insert(words.end(), lambda.begin(), lambda.end());
    }
    std::vector<uint64_t> letter_elem(static_cast<size_t>(k) * 2);
    for (int g = 0; g < k; ++g) {
        uint64_t e = struct_gen_elem(L, static_cast<size_t>(g));
        letter_elem[static_cast<size_t>(g) * 2] = e;
        letter_elem[static_cast<size_t>(g) * 2 + 1] = G.inv(e);
    }
    auto eval = [&](const Word& w) {
        uint64_t acc = 0;
        for (const Letter& l : w.letters) {
            acc = G.mul(acc, letter_elem[static_cast<size_t>(l.gen) * 2 + (l.sign > 0 ? 0 : 1)]);
        }
        return acc;
    };

    // The closed form used for marker images must agree with plain evaluation.
    for (uint64_t n = 1; n <= std::min<uint64_t>(N, 3); ++n) {
        if (eval(struct_y_word(k, n)) != struct_y_elem(L, n)) return false;
    }

    std::map<Word, size_t, bool (*)(const Word&, const Word&)> index(word_less);
    for (size_t w = 0; w < words.size(); ++w) index.emplace(words[w], w);
    Word y1 = struct_y_word(k, 1);
    std::unordered_map<size_t, uint64_t> reduces_into_list;  // word idx -> image it must equal
    std::vector<uint64_t> wimg(words.size());
    for (size_t w = 0; w < words.size(); ++w) wimg[w] = eval(words[w]);
    for (size_t w2 = 1; w2 < words.size(); ++w2) {
        Word r = concat(words[w2], y1);
        auto it = index.find(r);
        if (it != index.end()) reduces_into_list.emplace(w2, wimg[it->second]);
    }

    std::unordered_set<uint64_t> seen;
    seen.reserve(words.size() * (N + 1));
    for (size_t w = 0; w < words.size(); ++w) {
        if (!seen.insert(wimg[w]).second) return false;
    }
    std::vector<uint64_t> yimg(N + 1);
    for (uint64_t n = 1; n <= N; ++n) {
        yimg[n] = struct_y_elem(L, n);
        if (!seen.insert(yimg[n]).second) return false;
    }
    for (size_t w2 = 1; w2 < words.size(); ++w2) {
        auto benign = reduces_into_list.find(w2);
        for (uint64_t n = 1; n <= N; ++n) {
            uint64_t img = G.mul(wimg[w2], yimg[n]);
            if (n == 1 && benign != reduces_into_list.end()) {
                if (img != benign->second) return false;
                continue;
            }
            if (!seen.insert(img).second) return false;
        }
    }
    return true;
}

} // namespace forge
