#include <algorithm>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "forge/tower.hpp"
#include "forge/word.hpp"

namespace forge {

namespace {

uint32_t act(const TowerLevel& L, const Word& w, uint32_t x) {
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        const Perm& table = it->sign > 0 ? L.f[static_cast<size_t>(it->gen)]
                                         : L.f_inv[static_cast<size_t>(it->gen)];
        x = table[x];
    }
    return x;
}

// Marker words are the conjugates a^n b a^-n (single generator: plain powers
// a^n). Collisions between a word image and a product are benign exactly when
// they are forced by free reduction against a marker.
bool marker_shaped(const Word& z, int k) {
    size_t m = z.letters.size();
    if (m == 0) return false;
    if (k == 1) {
        for (const Letter& l : z.letters) {
            if (l.gen != 0 || l.sign <= 0) return false;
        }
        return true;
    }
    if (m % 2 == 0) return false;
    size_t n = m / 2;
    for (size_t i = 0; i < n; ++i) {
        if (z.letters[i].gen != 0 || z.letters[i].sign <= 0) return false;
    }
    if (z.letters[n].gen != 1 || z.letters[n].sign <= 0) return false;
    for (size_t i = n + 1; i < m; ++i) {
        if (z.letters[i].gen != 0 || z.letters[i].sign > 0) return false;
    }
    return true;
}

struct Check {
    VerifyReport& report;
    void fail(const Node& node, const std::string& what) {
        report.ok = false;
        report.violations.push_back("node " + node_str(node) + ": " + what);
    }
};

void check_level_structure(Check& c, const Tower& t, size_t idx, uint64_t expected_base) {
    const TowerLevel& L = t.levels[idx];
    size_t k = size_t{1} << L.node.lg();
    if (L.size == 0) c.fail(L.node, "empty block");
    if (L.global_base != expected_base) {
        c.fail(L.node, "global base " + std::to_string(L.global_base) + ", expected " +
                           std::to_string(expected_base));
    }
    if (L.f.size() != k || L.f_inv.size() != k) {
        c.fail(L.node, "expected " + std::to_string(k) + " generator actions, found " +
                           std::to_string(L.f.size()));
    }
    if (L.A.size() != k) {
        c.fail(L.node, "expected " + std::to_string(k) + " marked sets, found " +
                           std::to_string(L.A.size()));
    }
    if (L.lsep < 0 || L.lsep > L.node.lg()) {
        c.fail(L.node, "separation horizon " + std::to_string(L.lsep) + " out of range");
    }
}

void check_actions(Check& c, const TowerLevel& L) {
    for (size_t i = 0; i < L.f.size(); ++i) {
        const Perm& p = L.f[i];
        if (p.size() != L.size) {
            c.fail(L.node, "generator " + std::to_string(i) + " acts on " +
                               std::to_string(p.size()) + " points, block has " +
                               std::to_string(L.size));
            return;
        }
        if (!is_permutation(p)) {
            c.fail(L.node, "generator " + std::to_string(i) + " is not a permutation");
            return;
        }
        if (!fixed_point_free(p)) {
            c.fail(L.node, "generator " + std::to_string(i) + " has a fixed point");
        }
        if (i >= L.f_inv.size() || L.f_inv[i].size() != p.size()) {
            c.fail(L.node, "generator " + std::to_string(i) + " missing inverse table");
            return;
        }
        for (uint32_t x = 0; x < p.size(); ++x) {
            if (L.f_inv[i][p[x]] != x) {
                c.fail(L.node, "generator " + std::to_string(i) + " inverse table wrong at " +
                                   std::to_string(x));
                break;
            }
        }
    }
}

void check_transitive(Check& c, const TowerLevel& L) {
    std::vector<char> seen(L.size, 0);
    std::vector<uint32_t> frontier{0};
    seen[0] = 1;
    size_t count = 1;
    while (!frontier.empty()) {
        uint32_t x = frontier.back();
        frontier.pop_back();
        for (const auto& tables : {&L.f, &L.f_inv}) {
            for (const Perm& p : *tables) {
                uint32_t y = p[x];
                if (!seen[y]) {
                    seen[y] = 1;
                    ++count;
                    frontier.push_back(y);
                }
            }
        }
    }
    if (count != L.size) {
        c.fail(L.node, "generators reach only " + std::to_string(count) + " of " +
                           std::to_string(L.size) + " elements");
    }
}

void check_marked_sets(Check& c, const Tower& t, const TowerLevel& L,
                       VerifyReport::LevelMargin& margin) {
    uint64_t anc = ancestor_chain_sum(t, L.node);
    uint64_t n1 = n1_for(t.schedule, L.node.lg(), anc);
    uint64_t n0 = n0_for(n1, L.node.lg());
    margin = {L.node, L.size, anc, n1, n0, 0};
    if (L.n1 != n1 || L.n0 != n0) {
        c.fail(L.node, "stored size targets (" + std::to_string(L.n1) + "," +
                           std::to_string(L.n0) + ") disagree with schedule (" +
                           std::to_string(n1) + "," + std::to_string(n0) + ")");
    }
    if (L.size < t.schedule.lambda * anc) {
        c.fail(L.node, "block size " + std::to_string(L.size) +
                           " below dominance bound " +
                           std::to_string(t.schedule.lambda * anc));
    }

    std::unordered_set<uint32_t> all;
    uint64_t min_size = t.schedule.profile == Profile::Strict ? n1 : n0;
    for (size_t i = 0; i < L.A.size(); ++i) {
        const auto& set = L.A[i];
        margin.aset = set.size();
        if (set.size() < min_size) {
            c.fail(L.node, "marked set " + std::to_string(i) + " has " +
                               std::to_string(set.size()) + " elements, needs " +
                               std::to_string(min_size));
        }
        if (t.schedule.profile == Profile::Strict &&
            t.schedule.lambda * anc > set.size()) {
            c.fail(L.node, "marked set " + std::to_string(i) +
                               " below strict dominance bound " +
                               std::to_string(t.schedule.lambda * anc));
        }
        if (!std::is_sorted(set.begin(), set.end()) ||
            std::adjacent_find(set.begin(), set.end()) != set.end()) {
            c.fail(L.node, "marked set " + std::to_string(i) + " not sorted unique");
        }
        for (uint32_t a : set) {
            if (a == 0 || a >= L.size) {
                c.fail(L.node, "marked set " + std::to_string(i) + " contains invalid element " +
                                   std::to_string(a));
                break;
            }
            if (!all.insert(a).second) {
                c.fail(L.node, "marked sets overlap at element " + std::to_string(a));
                break;
            }
        }
    }
}

void check_separation(Check& c, const TowerLevel& L) {
    int k = 1 << L.node.lg();
    std::vector<Word> words{Word{k, {}}};
    if (L.lsep >= 1) {
        auto lambda = enumerate_words(k, L.lsep);
        words.insert(words.end(), lambda.begin(), lambda.end());
    }

    std::unordered_map<uint32_t, size_t> word_image;  // image of identity -> word idx
    for (size_t w = 0; w < words.size(); ++w) {
        uint32_t x = act(L, words[w], 0);
        if (w > 0 && x == 0) {
            c.fail(L.node, "word " + to_string(words[w]) + " acts trivially on the base point");
            return;
        }
        if (!word_image.emplace(x, w).second) {
            c.fail(L.node, "words " + to_string(words[w]) + " and " +
                               to_string(words[word_image[x]]) + " agree on the base point");
            return;
        }
    }

    std::vector<uint32_t> marked;
    for (const auto& set : L.A) marked.insert(marked.end(), set.begin(), set.end());
    for (uint32_t a : marked) {
        if (word_image.count(a)) {
            c.fail(L.node, "marked element " + std::to_string(a) + " collides with word " +
                               to_string(words[word_image[a]]));
            return;
        }
    }

    std::unordered_set<uint32_t> products;
    std::unordered_set<uint32_t> marked_set(marked.begin(), marked.end());
    for (size_t w = 1; w < words.size(); ++w) {
        for (uint32_t a : marked) {
            uint32_t y = act(L, words[w], a);
            auto hit = word_image.find(y);
            if (hit != word_image.end()) {
                // Benign only when forced by free reduction against a marker.
                Word z = concat(inverse(words[w]), words[hit->second]);
                if (!(marker_shaped(z, k) && act(L, z, 0) == a)) {
                    c.fail(L.node, "translate of marked element " + std::to_string(a) + " by " +
                                       to_string(words[w]) + " collides with word " +
                                       to_string(words[hit->second]));
                    return;
                }
                continue;
            }
            if (marked_set.count(y)) {
                c.fail(L.node, "translate of marked element " + std::to_string(a) + " by " +
                                   to_string(words[w]) + " lands in a marked set");
                return;
            }
            if (!products.insert(y).second) {
                c.fail(L.node, "translates by length-" + std::to_string(L.lsep) +
                                   " words collide at element " + std::to_string(y));
                return;
            }
        }
    }
}

} // namespace

VerifyReport verify_tower(const Tower& t) {
    VerifyReport report;
    Check c{report};

    std::vector<Node> expected = nodes_up_to(t.depth);
    if (t.levels.size() != expected.size()) {
        c.fail(Node{}, "tower has " + std::to_string(t.levels.size()) + " levels, expected " +
                           std::to_string(expected.size()));
        return report;
    }
    uint64_t base = 0;
    for (size_t i = 0; i < expected.size(); ++i) {
        if (!(t.levels[i].node == expected[i])) {
            c.fail(t.levels[i].node, "out of order, expected " + node_str(expected[i]));
            return report;
        }
        check_level_structure(c, t, i, base);
        base += t.levels[i].size;
    }
    if (t.universe_size != base) {
        c.fail(Node{}, "universe size " + std::to_string(t.universe_size) + ", blocks sum to " +
                           std::to_string(base));
    }
    if (!report.ok) return report;

    for (const TowerLevel& L : t.levels) {
        check_actions(c, L);
        if (!report.ok) return report;
        check_transitive(c, L);
        VerifyReport::LevelMargin margin;
        check_marked_sets(c, t, L, margin);
        report.margins.push_back(margin);
        check_separation(c, L);
    }
    return report;
}

} // namespace forge
