#include "forge/surgery.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "forge/classify.hpp"
#include "forge/errors.hpp"
#include "forge/geodesic.hpp"
#include "forge/word.hpp"

namespace forge {

namespace {

const TowerLevel& chain_level(const Tower& t, const Node& eta1, int n) {
    return t.at(prefix(eta1, n));
}

bool is_marked(const TowerLevel& L, uint64_t global_id) {
    if (global_id < L.global_base || global_id >= L.global_base + L.size) return false;
    uint32_t local = static_cast<uint32_t>(global_id - L.global_base);
    for (const auto& aset : L.A) {
        if (std::find(aset.begin(), aset.end(), local) != aset.end()) return true;
    }
    return false;
}

uint64_t factorial_capped(size_t m) {
    uint64_t out = 1;
    for (size_t i = 2; i <= m; ++i) {
        if (out > (uint64_t{1} << 40)) break;
        out *= i;
    }
    return out;
}

struct ChainGeodesic {
    uint32_t length = 0;
    std::vector<int> signs;
    std::vector<Node> labels;
};

ChainGeodesic chain_geodesic(const Tower& t, const SurgerySpec& spec, int n) {
    const TowerLevel& L = chain_level(t, spec.eta1, n);
    GeodesicEngine eng(L);
    Geodesic g = eng.geodesic(static_cast<uint32_t>(spec.a.at(n) - L.global_base),
                              static_cast<uint32_t>(spec.b.at(n) - L.global_base));
    ChainGeodesic out;
    out.length = static_cast<uint32_t>(g.length());
    for (const auto& s : g.steps) {
        out.signs.push_back(s.sign);
        out.labels.push_back(s.nu);
    }
    return out;
}

} // namespace

std::string case_name(CaseTag tag) {
    switch (tag) {
        case CaseTag::Ka: return "Ka";
        case CaseTag::Kb: return "Kb";
        case CaseTag::Kc: return "Kc";
    }
    throw Unreachable("unnamed case tag");
}

SurgerySpec derive_spec(const Tower& t, const Perm& f, const Node& eta1, const Node& eta2,
                        const std::vector<int>& B, const std::map<int, uint64_t>& a) {
    if (f.size() != t.universe_size) {
        throw ParseError("permutation degree does not match the universe");
    }
    if (!is_permutation(f)) throw ParseError("derive_spec requires a bijection");
    if (eta1.lg() < t.depth) throw ParseError("eta1 shorter than the tower depth");
    if (eta2.lg() < t.depth) throw ParseError("eta2 shorter than the tower depth");
    for (size_t i = 1; i < B.size(); ++i) {
        if (B[i] <= B[i - 1]) throw ParseError("levels must be strictly increasing");
    }

    SurgerySpec spec;
    spec.eta1 = eta1;
    spec.eta2 = eta2;
    Perm F = f1(t, f);
    Perm Finv = inverse_perm(F);
    for (int n : B) {
        if (n < 0 || n > t.depth) throw ParseError("level outside the tower");
        auto it = a.find(n);
        if (it == a.end()) throw ParseError("missing element for level " + std::to_string(n));
        uint64_t an = it->second;
        const TowerLevel& L = chain_level(t, eta1, n);
        if (!is_marked(L, an)) {
            throw ParseError("element " + std::to_string(an) +
                             " is not marked in the level-" + std::to_string(n) + " block");
        }
        uint64_t bn = f[an];
        if (bn == F[an]) {
            spec.dropped.push_back(n);
            continue;
        }
        spec.B.push_back(n);
        spec.a[n] = an;
        spec.b[n] = bn;
        spec.nu[n] = t.levels[t.locate(bn).first].node;
        spec.e[n] = F[an];
        spec.c[n] = Finv[bn];
        spec.d[n] = F[bn];
    }
    return spec;
}

Perm build_g(const Tower& t, const Perm& f, const SurgerySpec& spec) {
    Perm g = f1(t, f);
    std::map<uint64_t, uint64_t> want;
    for (int n : spec.B) {
        const std::pair<uint64_t, uint64_t> rewires[3] = {
            {spec.a.at(n), spec.b.at(n)},
            {spec.b.at(n), spec.e.at(n)},
            {spec.c.at(n), spec.d.at(n)},
        };
        for (const auto& [src, img] : rewires) {
            auto it = want.find(src);
            if (it != want.end() && it->second != img) {
                throw NotBijective("element " + std::to_string(src) +
                                   " rewired to both " + std::to_string(it->second) +
                                   " and " + std::to_string(img));
            }
            want[src] = img;
        }
    }
    for (const auto& [src, img] : want) {
        g[src] = static_cast<uint32_t>(img);
    }
    if (!is_permutation(g)) {
        std::vector<uint8_t> seen(g.size(), 0);
        for (uint64_t x = 0; x < g.size(); ++x) {
            if (seen[g[x]]) {
                throw NotBijective("image " + std::to_string(g[x]) +
                                   " produced twice, second source " + std::to_string(x));
            }
            seen[g[x]] = 1;
        }
        throw Unreachable("non-bijective table without a duplicate image");
    }
    for (uint64_t x = 0; x < g.size(); ++x) {
        if (g[x] == x) {
            throw FixedPointViolation("rewired permutation fixes " + std::to_string(x));
        }
    }
    return g;
}

CaseTag detect_case(const Tower& t, const SurgerySpec& spec, const Perm& f) {
    if (f.size() != t.universe_size || !is_permutation(f)) {
        throw ParseError("detect_case requires a bijection on the universe");
    }
    bool ka = true;
    int max_prev = -1;
    for (int n : spec.B) {
        const Node& nu = spec.nu.at(n);
        if (!star_less(prefix(spec.eta1, n), nu)) {
            ka = false;
            break;
        }
        if (meet_len(spec.eta2, nu) <= max_prev) {
            ka = false;
            break;
        }
        max_prev = std::max(max_prev, nu.lg());
    }

    bool in_block = true;
    for (int n : spec.B) {
        if (spec.nu.at(n) != prefix(spec.eta1, n)) {
            in_block = false;
            break;
        }
    }
    bool kb = in_block;
    bool kc = in_block;
    if (in_block) {
        std::vector<ChainGeodesic> geos;
        for (int n : spec.B) geos.push_back(chain_geodesic(t, spec, n));
        for (size_t i = 1; i < geos.size(); ++i) {
            if (geos[i].length <= geos[i - 1].length) kb = false;
            if (geos[i].length != geos[i - 1].length) kc = false;
            if (geos[i].signs != geos[i - 1].signs) kc = false;
        }
        if (kc && !geos.empty()) {
            uint32_t lstar = geos.front().length;
            bool found = false;
            for (uint32_t l = 0; l < lstar && !found; ++l) {
                bool incomparable = true;
                for (size_t i = 0; i < geos.size() && incomparable; ++i) {
                    for (size_t j = i + 1; j < geos.size(); ++j) {
                        const Node& x = geos[i].labels[l];
                        const Node& y = geos[j].labels[l];
                        if (is_prefix(x, y) || is_prefix(y, x)) {
                            incomparable = false;
                            break;
                        }
                    }
                }
                if (incomparable) found = true;
            }
            kc = found;
        }
    }

    int hits = (ka ? 1 : 0) + (kb ? 1 : 0) + (kc ? 1 : 0);
    if (hits == 0) throw NoCase("no disjunct holds for the spec");
    if (hits > 1) {
        std::string which;
        if (ka) which += " Ka";
        if (kb) which += " Kb";
        if (kc) which += " Kc";
        throw AmbiguousCase("multiple disjuncts hold:" + which);
    }
    if (ka) return CaseTag::Ka;
    if (kb) return CaseTag::Kb;
    return CaseTag::Kc;
}

namespace {

// Largest escape-level subset admitting a guide branch with strictly growing
// meets; ties go to the lexicographically least level list.
bool case_one_spec(const Tower& t, const Perm& f, const Node& eta1,
                   const ClassifierReport& r, std::vector<int>& B_out,
                   std::map<int, uint64_t>& a_out, Node& eta2_out) {
    std::vector<int> levels;
    std::map<int, uint64_t> first_escape;
    std::map<int, Node> nu;
    for (int n : r.escape_levels) {
        const TowerLevel& L = t.at(prefix(eta1, n));
        std::vector<uint64_t> marked;
        for (const auto& aset : L.A) {
            for (uint32_t x : aset) marked.push_back(L.global_base + x);
        }
        std::sort(marked.begin(), marked.end());
        for (uint64_t a : marked) {
            if (f[a] >= L.global_base + L.size) {
                first_escape[n] = a;
                nu[n] = t.levels[t.locate(f[a]).first].node;
                break;
            }
        }
        levels.push_back(n);
    }

    std::vector<std::vector<int>> subsets;
    for (uint32_t m = 1; m < (1u << levels.size()); ++m) {
        std::vector<int> sub;
        for (size_t i = 0; i < levels.size(); ++i) {
            if (m & (1u << i)) sub.push_back(levels[i]);
        }
        subsets.push_back(std::move(sub));
    }
    std::sort(subsets.begin(), subsets.end(), [](const auto& x, const auto& y) {
        if (x.size() != y.size()) return x.size() > y.size();
        return x < y;
    });

    for (const auto& sub : subsets) {
        for (auto it = sub.rbegin(); it != sub.rend(); ++it) {
            Node cand = zero_pad(nu.at(*it), t.depth);
            bool ok = true;
            int max_prev = -1;
            for (int n : sub) {
                if (!star_less(prefix(eta1, n), nu.at(n)) ||
                    meet_len(cand, nu.at(n)) <= max_prev) {
                    ok = false;
                    break;
                }
                max_prev = std::max(max_prev, nu.at(n).lg());
            }
            if (!ok) continue;
            B_out = sub;
            a_out.clear();
            for (int n : sub) a_out[n] = first_escape.at(n);
            eta2_out = cand;
            return true;
        }
    }
    return false;
}

// Longest level chain with strictly increasing decomposition lengths,
// preferring the least element at each level among chain-completing choices.
bool case_two_a_spec(const ClassifierReport& r, std::vector<int>& B_out,
                     std::map<int, uint64_t>& a_out) {
    std::vector<int> levels;
    for (const auto& [n, vn] : r.v) {
        if (n >= r.b13 && !vn.empty()) levels.push_back(n);
    }
    if (levels.empty()) return false;

    // With every level of the subset mandatory, taking the least admissible
    // length at each level is optimal, so feasibility is a greedy scan.
    auto feasible_tail = [&](const std::vector<int>& sub, size_t from, uint32_t floor) {
        uint32_t cur = floor;
        for (size_t i = from; i < sub.size(); ++i) {
            uint32_t best = 0;
            bool found = false;
            for (uint32_t l : r.lvals.at(sub[i])) {
                if (l > cur && (!found || l < best)) {
                    best = l;
                    found = true;
                }
            }
            if (!found) return false;
            cur = best;
        }
        return true;
    };

    std::vector<std::vector<int>> subsets;
    for (uint32_t m = 1; m < (1u << levels.size()); ++m) {
        std::vector<int> sub;
        for (size_t i = 0; i < levels.size(); ++i) {
            if (m & (1u << i)) sub.push_back(levels[i]);
        }
        subsets.push_back(std::move(sub));
    }
    std::sort(subsets.begin(), subsets.end(), [](const auto& x, const auto& y) {
        if (x.size() != y.size()) return x.size() > y.size();
        return x < y;
    });

    for (const auto& sub : subsets) {
        if (!feasible_tail(sub, 0, 0)) continue;
        B_out.clear();
        a_out.clear();
        uint32_t cur = 0;
        for (size_t i = 0; i < sub.size(); ++i) {
            int n = sub[i];
            const auto& geos = r.geodesics.at(n);
            const auto& vn = r.v.at(n);
            for (size_t m = 0; m < vn.size(); ++m) {
                uint32_t l = static_cast<uint32_t>(geos[m].length());
                if (l > cur && feasible_tail(sub, i + 1, l)) {
                    B_out.push_back(n);
                    a_out[n] = vn[m];
                    cur = l;
                    break;
                }
            }
        }
        return B_out.size() == sub.size();
    }
    return false;
}

} // namespace

std::pair<SurgerySpec, Perm> pick_g(const Tower& t, const Perm& f) {
    Node eta1 = branch_code(t, f);
    ClassifierReport r = classify(t, f, eta1);
    r = extract_families(t, f, eta1, r);

    if (r.b11) {
        // Persistent fixed points: the only admissible output is the branch
        // permutation of f's code, untouched.
        SurgerySpec spec;
        spec.eta1 = eta1;
        spec.eta2 = eta1;
        return {spec, f1(t, f)};
    }

    std::vector<int> B;
    std::map<int, uint64_t> a;
    Node eta2 = eta1;
    bool have = false;
    if (r.b12) {
        have = case_one_spec(t, f, eta1, r, B, a, eta2);
        if (!have) throw Unreachable("escape levels admit no guide branch");
    } else if (r.b14) {
        have = case_two_a_spec(r, B, a);
    } else if (r.b16) {
        if (r.family_found && r.family.incomparable) {
            for (int n : r.family.levels) {
                B.push_back(n);
                a[n] = r.family.members.at(n).front();
            }
            have = !B.empty();
        }
    } else if (r.b26p == 1 && r.family_found && !r.family.incomparable) {
        bool has_false = false;
        for (int v : r.family.comparability) {
            if (v == 0) has_false = true;
        }
        if (has_false) {
            for (int n : r.family.levels) {
                B.push_back(n);
                a[n] = r.family.members.at(n).front();
            }
            have = true;
        }
    }
    if (!have) {
        throw NoSpecFound("no disjunct is witnessed within the horizon");
    }

    SurgerySpec spec = derive_spec(t, f, eta1, eta2, B, a);
    if (spec.B.empty()) {
        throw NoSpecFound("every candidate level is degenerate");
    }
    Perm g = build_g(t, f, spec);
    return {spec, g};
}

RecoveredWord recover_word(const Tower& t, const Perm& h, int m_max) {
    if (h.size() != t.universe_size) {
        throw ParseError("permutation degree does not match the universe");
    }
    if (!is_permutation(h)) throw ParseError("recover_word requires a bijection");
    if (m_max < 0) throw ParseError("negative word length bound");

    int k = 1 << t.depth;
    int bound = std::min(m_max, t.depth);
    std::vector<Word> candidates;
    candidates.push_back(Word{k, {}});
    for (Word& w : enumerate_words(k, bound)) {
        candidates.push_back(std::move(w));
    }

    std::vector<Node> deep_labels = nodes_of_length(static_cast<size_t>(t.depth));
    bool have_word = false;
    Word found{k, {}};
    std::vector<Node> exceptional;

    for (const auto& L : t.levels) {
        if (L.node.lg() != t.depth) continue;
        uint64_t lo = L.global_base;
        bool in_block = true;
        for (uint64_t x = lo; x < lo + L.size && in_block; ++x) {
            if (h[x] < lo || h[x] >= lo + L.size) in_block = false;
        }
        const Word* match = nullptr;
        if (in_block) {
            for (const Word& w : candidates) {
                bool equal = true;
                for (uint32_t x = 0; x < L.size && equal; ++x) {
                    if (apply_word(w, L.f, L.f_inv, x) != h[lo + x] - lo) equal = false;
                }
                if (!equal) continue;
                if (match != nullptr) {
                    throw Unrepresentable("two words of length at most " +
                                          std::to_string(bound) + " represent the block " +
                                          node_str(L.node));
                }
                match = &w;
            }
        }
        if (match == nullptr) {
            exceptional.push_back(L.node);
            continue;
        }
        if (!have_word) {
            found = *match;
            have_word = true;
        } else if (found != *match) {
            throw Unrepresentable("blocks disagree on the word, first at " + node_str(L.node));
        }
    }

    if (!have_word) {
        throw Unrepresentable("no deepest-level block is represented by a word of length at most " +
                              std::to_string(bound));
    }
    uint64_t allowed = factorial_capped(found.length());
    if (exceptional.size() > allowed) {
        throw Unrepresentable(std::to_string(exceptional.size()) +
                              " exceptional blocks exceed the bound " + std::to_string(allowed));
    }

    RecoveredWord out;
    for (const Letter& l : found.letters) {
        out.letters.push_back(BranchLetter{deep_labels[static_cast<size_t>(l.gen)], l.sign});
    }
    out.exceptional_nodes = exceptional;
    return out;
}

std::vector<std::string> spec_lines(const SurgerySpec& spec) {
    std::vector<std::string> out;
    std::ostringstream head;
    head << "SPEC levels=";
    for (size_t i = 0; i < spec.B.size(); ++i) {
        if (i) head << ",";
        head << spec.B[i];
    }
    if (spec.B.empty()) head << "-";
    head << " eta1=" << node_str(spec.eta1) << " eta2=" << node_str(spec.eta2);
    if (!spec.dropped.empty()) {
        head << " dropped=";
        for (size_t i = 0; i < spec.dropped.size(); ++i) {
            if (i) head << ",";
            head << spec.dropped[i];
        }
    }
    out.push_back(head.str());
    for (int n : spec.B) {
        std::ostringstream line;
        line << "N " << n << " a=" << spec.a.at(n) << " b=" << spec.b.at(n)
             << " c=" << spec.c.at(n) << " d=" << spec.d.at(n) << " e=" << spec.e.at(n)
             << " nu=" << node_str(spec.nu.at(n));
        out.push_back(line.str());
    }
    return out;
}

} // namespace forge
