#include "forge/classify.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "forge/errors.hpp"
#include "forge/gstar.hpp"

namespace forge {

namespace {

uint32_t max_or_zero(const std::vector<uint32_t>& xs) {
    uint32_t m = 0;
    for (uint32_t x : xs) m = std::max(m, x);
    return m;
}

std::vector<int> geodesic_signs(const Geodesic& g) {
    std::vector<int> out;
    out.reserve(g.length());
    for (const auto& s : g.steps) out.push_back(s.sign);
    return out;
}

std::vector<Node> geodesic_labels(const Geodesic& g) {
    std::vector<Node> out;
    out.reserve(g.length());
    for (const auto& s : g.steps) out.push_back(s.nu);
    return out;
}

bool tuple_less(const std::vector<Node>& a, const std::vector<Node>& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        int c = star_compare(a[i], b[i]);
        if (c != 0) return c < 0;
    }
    return a.size() < b.size();
}

} // namespace

int code_width(uint64_t universe_size) {
    if (universe_size == 0) throw ParseError("empty universe has no code width");
    return universe_size == 1 ? 0 : std::bit_width(universe_size - 1);
}

PermCode encode(const Tower& t, const Perm& f) {
    if (f.size() != t.universe_size) {
        throw ParseError("permutation degree does not match the universe");
    }
    if (!is_permutation(f)) throw ParseError("encode requires a bijection");
    int w = code_width(t.universe_size);
    PermCode code;
    code.bits.assign(f.size() * static_cast<size_t>(w), 0);
    for (size_t i = 0; i < f.size(); ++i) {
        for (int b = 0; b < w; ++b) {
            code.bits[i * static_cast<size_t>(w) + static_cast<size_t>(b)] =
                static_cast<uint8_t>((f[i] >> (w - 1 - b)) & 1u);
        }
    }
    return code;
}

Perm decode(const Tower& t, const PermCode& code) {
    int w = code_width(t.universe_size);
    size_t want = t.universe_size * static_cast<size_t>(w);
    if (code.bits.size() != want) {
        throw MalformedCode("code length " + std::to_string(code.bits.size()) +
                            ", expected " + std::to_string(want));
    }
    Perm f(t.universe_size, 0);
    for (size_t i = 0; i < t.universe_size; ++i) {
        uint64_t v = 0;
        for (int b = 0; b < w; ++b) {
            uint8_t bit = code.bits[i * static_cast<size_t>(w) + static_cast<size_t>(b)];
            if (bit > 1) throw MalformedCode("code entry is not a bit");
            v = v * 2 + bit;
        }
        if (v >= t.universe_size) {
            throw MalformedCode("image " + std::to_string(v) + " outside the universe");
        }
        f[i] = static_cast<uint32_t>(v);
    }
    if (!is_permutation(f)) throw MalformedCode("decoded table is not a bijection");
    return f;
}

Node branch_code(const Tower& t, const Perm& f) {
    PermCode code = encode(t, f);
    if (code.bits.size() < static_cast<size_t>(t.depth)) {
        throw Unreachable("code shorter than the tower depth");
    }
    Node branch;
    branch.bits.assign(code.bits.begin(), code.bits.begin() + t.depth);
    return branch;
}

Perm f1(const Tower& t, const Perm& f) {
    BranchWord w;
    w.letters.push_back(BranchLetter{branch_code(t, f), +1});
    return word_perm(t, w);
}

ClassifierReport classify(const Tower& t, const Perm& f, const Node& eta1) {
    if (f.size() != t.universe_size) {
        throw ParseError("permutation degree does not match the universe");
    }
    if (!is_permutation(f)) throw ParseError("classify requires a bijection");
    if (eta1.lg() < t.depth) throw ParseError("branch shorter than the tower depth");

    ClassifierReport r;
    r.horizon = t.depth;
    for (uint64_t x = 0; x < t.universe_size; ++x) {
        if (f[x] == x) ++r.fix_count;
    }

    for (const auto& L : t.levels) {
        if (L.node.lg() != t.depth) continue;
        for (uint64_t x = L.global_base; x < L.global_base + L.size; ++x) {
            if (f[x] == x) {
                r.b11 = 1;
                break;
            }
        }
        if (r.b11) break;
    }

    for (int n = 0; n <= t.depth; ++n) {
        const TowerLevel& L = t.at(prefix(eta1, n));
        uint64_t lo = L.global_base;
        uint64_t hi = lo + L.size;
        bool escape = false;
        std::vector<uint64_t> vn;
        for (const auto& aset : L.A) {
            for (uint32_t a_local : aset) {
                uint64_t a = lo + a_local;
                uint64_t b = f[a];
                if (b >= hi) escape = true;
                if (b >= lo && b < hi) vn.push_back(a);
            }
        }
        std::sort(vn.begin(), vn.end());
        if (escape) r.escape_levels.push_back(n);

        GeodesicEngine eng(L);
        std::vector<Geodesic> geos;
        std::vector<uint32_t> lens;
        geos.reserve(vn.size());
        lens.reserve(vn.size());
        for (uint64_t a : vn) {
            Geodesic g = eng.geodesic(static_cast<uint32_t>(a - lo),
                                      static_cast<uint32_t>(f[a] - lo));
            lens.push_back(static_cast<uint32_t>(g.length()));
            geos.push_back(std::move(g));
        }
        std::vector<uint32_t> multiset = lens;
        std::sort(multiset.begin(), multiset.end());
        r.v[n] = std::move(vn);
        r.geodesics[n] = std::move(geos);
        r.lvals[n] = std::move(multiset);
    }

    r.b12 = (!r.b11 && !r.escape_levels.empty()) ? 1 : 0;
    r.b13 = r.escape_levels.empty() ? 0 : r.escape_levels.back() + 1;

    if (!r.b11 && !r.b12) {
        uint32_t deep_max = max_or_zero(r.lvals[t.depth]);
        bool strict = !r.lvals[t.depth].empty();
        for (int n = r.b13; n < t.depth && strict; ++n) {
            if (max_or_zero(r.lvals[n]) >= deep_max) strict = false;
        }
        r.b14 = strict ? 1 : 0;
    }

    for (int n = r.b13; n <= t.depth; ++n) {
        r.b15 = std::max(r.b15, max_or_zero(r.lvals[n]));
    }

    if (!r.b11 && !r.b12 && !r.b14) {
        for (int n = 1; n <= t.depth && !r.b16; ++n) {
            const auto& geos = r.geodesics[n];
            for (size_t i = 0; i < geos.size() && !r.b16; ++i) {
                for (size_t j = i + 1; j < geos.size() && !r.b16; ++j) {
                    size_t lmax = std::min(geos[i].length(), geos[j].length());
                    for (size_t l = 0; l < lmax; ++l) {
                        const Node& ri = geos[i].steps[l].nu;
                        const Node& rj = geos[j].steps[l].nu;
                        if (ri != rj && prefix(ri, n - 1) == prefix(rj, n - 1)) {
                            r.b16 = 1;
                            break;
                        }
                    }
                }
            }
        }
    }

    r.b26 = 0;
    r.b26p = 1;
    return r;
}

namespace {

// One member per level, shared length and signs, constant comparability
// verdicts with at least one constant-false position.
bool extract_incomparable(const std::vector<int>& cand_levels, ClassifierReport& r) {
    struct LevelData {
        int level;
        // signature (length, sign vector) -> member indices into r.v[level]
        std::map<std::pair<size_t, std::vector<int>>, std::vector<size_t>> by_sig;
    };
    std::vector<LevelData> data;
    for (int n : cand_levels) {
        LevelData d;
        d.level = n;
        const auto& geos = r.geodesics[n];
        for (size_t i = 0; i < geos.size(); ++i) {
            if (geos[i].empty()) continue;
            d.by_sig[{geos[i].length(), geodesic_signs(geos[i])}].push_back(i);
        }
        if (!d.by_sig.empty()) data.push_back(std::move(d));
    }
    if (data.size() < 2) return false;

    std::vector<std::vector<size_t>> picks;
    for (uint32_t m = 1; m < (1u << data.size()); ++m) {
        if (std::popcount(m) < 2) continue;
        std::vector<size_t> pick;
        for (size_t i = 0; i < data.size(); ++i) {
            if (m & (1u << i)) pick.push_back(i);
        }
        picks.push_back(std::move(pick));
    }
    std::sort(picks.begin(), picks.end(),
              [](const std::vector<size_t>& a, const std::vector<size_t>& b) {
                  if (a.size() != b.size()) return a.size() > b.size();
                  return a < b;
              });

    for (const auto& pick : picks) {
        std::set<std::pair<size_t, std::vector<int>>> shared;
        for (const auto& [sig, members] : data[pick[0]].by_sig) shared.insert(sig);
        for (size_t i = 1; i < pick.size(); ++i) {
            std::set<std::pair<size_t, std::vector<int>>> next;
            for (const auto& sig : shared) {
                if (data[pick[i]].by_sig.count(sig)) next.insert(sig);
            }
            shared = std::move(next);
        }
        for (const auto& sig : shared) {
            size_t lstar = sig.first;
            if (lstar < 1) continue;

            std::vector<std::vector<size_t>> cands;
            for (size_t i : pick) cands.push_back(data[i].by_sig.at(sig));
            std::vector<size_t> chosen;
            std::vector<int> verdict(lstar, -1);

            std::function<bool(size_t)> dfs = [&](size_t li) -> bool {
                if (li == cands.size()) {
                    return std::find(verdict.begin(), verdict.end(), 0) != verdict.end();
                }
                int level = data[pick[li]].level;
                for (size_t idx : cands[li]) {
                    auto labels = geodesic_labels(r.geodesics[level][idx]);
                    std::vector<size_t> undo;
                    bool ok = true;
                    for (size_t pj = 0; pj < chosen.size() && ok; ++pj) {
                        int plevel = data[pick[pj]].level;
                        auto plabels = geodesic_labels(r.geodesics[plevel][chosen[pj]]);
                        for (size_t l = 0; l < lstar; ++l) {
                            int w = is_prefix(plabels[l], labels[l]) ? 1 : 0;
                            if (verdict[l] == -1) {
                                verdict[l] = w;
                                undo.push_back(l);
                            } else if (verdict[l] != w) {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if (ok) {
                        chosen.push_back(idx);
                        if (dfs(li + 1)) return true;
                        chosen.pop_back();
                    }
                    for (size_t l : undo) verdict[l] = -1;
                }
                return false;
            };

            if (!dfs(0)) continue;

            ExtractedFamily fam;
            fam.incomparable = true;
            fam.l_star = static_cast<uint32_t>(lstar);
            fam.signs = sig.second;
            for (size_t li = 0; li < pick.size(); ++li) {
                int level = data[pick[li]].level;
                size_t idx = chosen[li];
                fam.levels.push_back(level);
                fam.members[level] = {r.v[level][idx]};
                fam.labels[level] = geodesic_labels(r.geodesics[level][idx]);
                fam.fraction_witness[level] = r.v[level].size();
            }
            fam.comparability.assign(verdict.begin(), verdict.end());
            for (size_t l = 0; l < lstar; ++l) {
                if (verdict[l] == 0) {
                    fam.l_star_star = static_cast<int>(l);
                    break;
                }
            }
            r.family = std::move(fam);
            r.family_found = true;
            return true;
        }
    }
    return false;
}

// Positive-fraction subsets per level sharing length, signs, and whole label
// tuples, then constant comparability verdicts across levels.
void extract_shape_family(ClassifierReport& r) {
    std::vector<int> levels;
    for (const auto& [n, vn] : r.v) {
        if (n >= r.b13 && !vn.empty()) levels.push_back(n);
    }
    if (levels.empty()) {
        r.family_note = "no level keeps any marked element inside its block";
        return;
    }
    uint64_t lsup = std::max<uint64_t>(r.b15, 1);

    // Majority decomposition length across the whole working range.
    std::set<uint32_t> length_cands;
    for (int n : levels) {
        for (uint32_t l : r.lvals[n]) length_cands.insert(l);
    }
    uint32_t best_len = 0;
    std::vector<int> b1;
    for (uint32_t c : length_cands) {
        std::vector<int> in;
        for (int n : levels) {
            uint64_t cnt = static_cast<uint64_t>(
                std::count(r.lvals[n].begin(), r.lvals[n].end(), c));
            if (cnt * lsup >= r.v[n].size()) in.push_back(n);
        }
        if (in.size() > b1.size()) {
            b1 = std::move(in);
            best_len = c;
        }
    }
    if (b1.empty()) {
        r.family_note = "no decomposition length reaches the per-level fraction";
        return;
    }

    // Majority sign vector among the chosen-length members.
    std::set<std::vector<int>> sign_cands;
    std::map<int, std::vector<size_t>> len_members;
    for (int n : b1) {
        for (size_t i = 0; i < r.geodesics[n].size(); ++i) {
            if (r.geodesics[n][i].length() != best_len) continue;
            len_members[n].push_back(i);
            sign_cands.insert(geodesic_signs(r.geodesics[n][i]));
        }
    }
    std::vector<int> best_signs;
    std::vector<int> b2;
    for (const auto& sv : sign_cands) {
        std::vector<int> in;
        for (int n : b1) {
            uint64_t cnt = 0;
            for (size_t i : len_members[n]) {
                if (geodesic_signs(r.geodesics[n][i]) == sv) ++cnt;
            }
            if (cnt * (uint64_t{1} << best_len) * lsup >= r.v[n].size()) in.push_back(n);
        }
        if (in.size() > b2.size()) {
            b2 = std::move(in);
            best_signs = sv;
        }
    }
    if (b2.empty()) {
        r.family_note = "no sign vector reaches the per-level fraction";
        return;
    }

    // Per level, the majority whole label tuple.
    std::map<int, std::vector<Node>> tuples;
    std::map<int, std::vector<size_t>> members;
    for (int n : b2) {
        std::map<std::vector<Node>, std::vector<size_t>,
                 bool (*)(const std::vector<Node>&, const std::vector<Node>&)>
            by_tuple(tuple_less);
        for (size_t i : len_members[n]) {
            if (geodesic_signs(r.geodesics[n][i]) != best_signs) continue;
            by_tuple[geodesic_labels(r.geodesics[n][i])].push_back(i);
        }
        const std::vector<Node>* best = nullptr;
        size_t best_cnt = 0;
        for (const auto& [tup, idxs] : by_tuple) {
            if (idxs.size() > best_cnt) {
                best_cnt = idxs.size();
                best = &tup;
            }
        }
        if (!best) continue;
        tuples[n] = *best;
        members[n] = by_tuple[*best];
    }
    std::vector<int> b2p;
    for (int n : b2) {
        if (tuples.count(n)) b2p.push_back(n);
    }
    if (b2p.empty()) {
        r.family_note = "no label tuple survives at any level";
        return;
    }

    // Constant comparability verdicts across levels, one color per packed
    // verdict vector.
    std::vector<int> b3;
    int color = 0;
    if (b2p.size() == 1 || best_len == 0) {
        b3 = b2p;
    } else {
        if (best_len > 20) throw Unreachable("decomposition length too large to pack");
        auto coloring = [&](size_t i, size_t j) -> int {
            int c = 0;
            for (size_t l = 0; l < best_len; ++l) {
                if (is_prefix(tuples.at(b2p[i])[l], tuples.at(b2p[j])[l])) c |= 1 << l;
            }
            return c;
        };
        HomogeneousSubset h = homogenize_pairs(b2p.size(), 1 << best_len, coloring);
        for (size_t i : h.indices) b3.push_back(b2p[i]);
        color = h.color;
    }

    ExtractedFamily fam;
    fam.incomparable = false;
    fam.l_star = best_len;
    fam.signs = best_signs;
    fam.levels = b3;
    for (int n : b3) {
        fam.labels[n] = tuples[n];
        for (size_t i : members[n]) fam.members[n].push_back(r.v[n][i]);
        uint64_t vn = r.v[n].size();
        uint64_t an = fam.members[n].size();
        fam.fraction_witness[n] = (vn + an - 1) / an;
    }
    if (b3.size() >= 2) {
        for (size_t l = 0; l < best_len; ++l) {
            fam.comparability.push_back((color >> l) & 1);
        }
        for (size_t i = 0; i < b3.size(); ++i) {
            for (size_t j = i + 1; j < b3.size(); ++j) {
                for (size_t l = 0; l < best_len; ++l) {
                    bool w = is_prefix(fam.labels[b3[i]][l], fam.labels[b3[j]][l]);
                    if (w != (fam.comparability[l] == 1)) {
                        throw Unreachable("comparability verdict not constant");
                    }
                }
            }
        }
    }
    r.family = std::move(fam);
    r.family_found = true;
    for (int verdict : r.family.comparability) {
        if (verdict == 0) r.b26 = 1;
    }
}

} // namespace

ClassifierReport extract_families(const Tower& t, const Perm& f, const Node& eta1,
                                  ClassifierReport r) {
    (void)t;
    (void)f;
    (void)eta1;
    r.family_found = false;
    r.family = ExtractedFamily{};
    r.family_note.clear();
    r.b26 = 0;
    r.b26p = 1;
    if (r.b11 || r.b12) {
        r.family_note = "escapes or persistent fixed points preempt extraction";
        return r;
    }
    if (r.b14) {
        r.family_note = "growing decomposition lengths preempt extraction";
        return r;
    }
    if (r.b16) {
        std::vector<int> cands;
        for (int n = std::max(1, r.b13); n <= r.horizon; ++n) {
            if (!r.v[n].empty()) cands.push_back(n);
        }
        if (!extract_incomparable(cands, r)) {
            r.family_note = "no cross-level member chain with an incomparable position";
        }
        return r;
    }
    extract_shape_family(r);
    if (r.family_found) r.b26p = r.b26;
    return r;
}

HomogeneousSubset homogenize_pairs(size_t items, int colors,
                                   const std::function<int(size_t, size_t)>& coloring) {
    if (items == 0) return {};
    if (colors < 1) throw ParseError("need at least one color");

    struct ChainEntry {
        size_t pivot;
        int color;  // -1 for the final survivor
    };
    std::vector<ChainEntry> chain;
    std::vector<size_t> live(items);
    for (size_t i = 0; i < items; ++i) live[i] = i;
    while (!live.empty()) {
        size_t p = live.front();
        std::map<int, std::vector<size_t>> classes;
        for (size_t i = 1; i < live.size(); ++i) {
            classes[coloring(p, live[i])].push_back(live[i]);
        }
        if (classes.empty()) {
            chain.push_back({p, -1});
            break;
        }
        int best = classes.begin()->first;
        for (const auto& [c, members] : classes) {
            if (members.size() > classes[best].size()) best = c;
        }
        chain.push_back({p, best});
        live = classes[best];
    }

    std::map<int, size_t> tally;
    for (const auto& e : chain) {
        if (e.color >= 0) ++tally[e.color];
    }
    HomogeneousSubset out;
    if (tally.empty()) {
        out.indices.push_back(chain.front().pivot);
        out.color = 0;
        return out;
    }
    int major = tally.begin()->first;
    for (const auto& [c, cnt] : tally) {
        if (cnt > tally[major]) major = c;
    }
    for (const auto& e : chain) {
        if (e.color == major || e.color == -1) out.indices.push_back(e.pivot);
    }
    out.color = major;

    // Guaranteed size: floor(log_colors(items)) - 1. When the pivot chain
    // falls short, search exhaustively for the least subset of that size.
    size_t bound = 0;
    if (colors >= 2) {
        uint64_t pow = 1;
        while (pow <= items / static_cast<uint64_t>(colors)) {
            pow *= static_cast<uint64_t>(colors);
            ++bound;
        }
        bound = bound > 0 ? bound - 1 : 0;
    } else {
        bound = items;
    }
    if (out.indices.size() < bound) {
        for (int target = 0; target < colors; ++target) {
            std::vector<size_t> pickd;
            std::function<bool(size_t)> dfs = [&](size_t start) -> bool {
                if (pickd.size() == bound) return true;
                for (size_t i = start; i < items; ++i) {
                    bool ok = true;
                    for (size_t j : pickd) {
                        if (coloring(j, i) != target) {
                            ok = false;
                            break;
                        }
                    }
                    if (!ok) continue;
                    pickd.push_back(i);
                    if (dfs(i + 1)) return true;
                    pickd.pop_back();
                }
                return false;
            };
            if (dfs(0)) {
                out.indices = pickd;
                out.color = target;
                break;
            }
        }
    }

    std::sort(out.indices.begin(), out.indices.end());
    for (size_t i = 0; i < out.indices.size(); ++i) {
        for (size_t j = i + 1; j < out.indices.size(); ++j) {
            if (coloring(out.indices[i], out.indices[j]) != out.color) {
                throw Unreachable("pair subset is not monochromatic");
            }
        }
    }
    return out;
}

HomogeneousSubset homogenize_triples(size_t items, int colors,
                                     const std::function<int(size_t, size_t, size_t)>& coloring) {
    if (items == 0) return {};
    if (colors < 1) throw ParseError("need at least one color");
    if (items <= 2) {
        HomogeneousSubset out;
        for (size_t i = 0; i < items; ++i) out.indices.push_back(i);
        return out;
    }

    struct ChainEntry {
        size_t pivot;
        int color;
    };
    std::vector<ChainEntry> chain;
    std::vector<size_t> live(items);
    for (size_t i = 0; i < items; ++i) live[i] = i;
    std::vector<size_t> tail;
    while (live.size() >= 3) {
        size_t p = live.front();
        std::vector<size_t> rest(live.begin() + 1, live.end());
        auto pair_coloring = [&](size_t i, size_t j) { return coloring(p, rest[i], rest[j]); };
        HomogeneousSubset h = homogenize_pairs(rest.size(), colors, pair_coloring);
        chain.push_back({p, h.color});
        std::vector<size_t> next;
        for (size_t i : h.indices) next.push_back(rest[i]);
        live = std::move(next);
    }
    tail = live;

    std::map<int, size_t> tally;
    for (const auto& e : chain) ++tally[e.color];
    HomogeneousSubset out;
    if (tally.empty()) {
        out.indices = tail;
        out.color = 0;
        std::sort(out.indices.begin(), out.indices.end());
        return out;
    }
    int major = tally.begin()->first;
    for (const auto& [c, cnt] : tally) {
        if (cnt > tally[major]) major = c;
    }
    for (const auto& e : chain) {
        if (e.color == major) out.indices.push_back(e.pivot);
    }
    for (size_t i : tail) out.indices.push_back(i);
    out.color = major;
    std::sort(out.indices.begin(), out.indices.end());

    for (size_t i = 0; i < out.indices.size(); ++i) {
        for (size_t j = i + 1; j < out.indices.size(); ++j) {
            for (size_t k = j + 1; k < out.indices.size(); ++k) {
                if (coloring(out.indices[i], out.indices[j], out.indices[k]) != out.color) {
                    throw Unreachable("triple subset is not monochromatic");
                }
            }
        }
    }
    return out;
}

Perm load_perm_file(const std::string& path, uint64_t universe_size) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string line;
    size_t lineno = 0;
    bool header_seen = false;
    uint64_t n = 0;
    Perm f;
    std::vector<uint8_t> seen_src;
    std::vector<uint8_t> seen_img;
    uint64_t rows = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string core = line.substr(0, line.find('#'));
        std::istringstream row(core);
        std::string first;
        if (!(row >> first)) continue;
        std::string where = path + ":" + std::to_string(lineno) + ": ";
        if (!header_seen) {
            if (first != "PERM") throw ParseError(where + "expected PERM header");
            if (!(row >> n)) throw ParseError(where + "missing element count");
            if (n != universe_size) {
                throw ParseError(where + "count " + std::to_string(n) +
                                 " does not match universe " + std::to_string(universe_size));
            }
            std::string extra;
            if (row >> extra) throw ParseError(where + "trailing tokens after header");
            header_seen = true;
            f.assign(n, 0);
            seen_src.assign(n, 0);
            seen_img.assign(n, 0);
            continue;
        }
        uint64_t src = 0;
        uint64_t img = 0;
        std::istringstream pair(core);
        if (!(pair >> src >> img)) throw ParseError(where + "expected two element ids");
        std::string extra;
        if (pair >> extra) throw ParseError(where + "trailing tokens after pair");
        if (src >= n || img >= n) throw ParseError(where + "element id outside the universe");
        if (seen_src[src]) throw ParseError(where + "repeated source " + std::to_string(src));
        if (seen_img[img]) throw ParseError(where + "repeated image " + std::to_string(img));
        seen_src[src] = 1;
        seen_img[img] = 1;
        f[src] = static_cast<uint32_t>(img);
        ++rows;
    }
    if (!header_seen) throw ParseError(path + ": missing PERM header");
    if (rows != n) {
        throw ParseError(path + ": " + std::to_string(rows) + " pairs for " +
                         std::to_string(n) + " elements");
    }
    return f;
}

void save_perm_file(const Perm& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    out << "PERM " << f.size() << "\n";
    for (size_t i = 0; i < f.size(); ++i) {
        out << i << " " << f[i] << "\n";
    }
    if (!out) throw ParseError("short write to " + path);
}

} // namespace forge
