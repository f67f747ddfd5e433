#include "forge/gstar.hpp"

#include <algorithm>
#include <sstream>

#include "forge/errors.hpp"

namespace forge {

bool branch_word_reduced(const BranchWord& w) {
    for (size_t i = 0; i + 1 < w.letters.size(); ++i) {
        if (w.letters[i].branch == w.letters[i + 1].branch &&
            w.letters[i].sign != w.letters[i + 1].sign) {
            return false;
        }
    }
    return true;
}

BranchWord parse_branch_word(const std::string& text) {
    BranchWord w;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        if (token.size() < 4 || token.compare(0, 2, "b:") != 0) {
            throw ParseError("bad branch letter '" + token + "', want b:<bits>:<+|->");
        }
        size_t colon = token.rfind(':');
        if (colon < 2 || colon + 2 != token.size()) {
            throw ParseError("bad branch letter '" + token + "', want b:<bits>:<+|->");
        }
        char signch = token[colon + 1];
        if (signch != '+' && signch != '-') {
            throw ParseError("bad sign in branch letter '" + token + "'");
        }
        w.letters.push_back(
            BranchLetter{parse_node(token.substr(2, colon - 2)), signch == '+' ? +1 : -1});
    }
    return w;
}

std::string branch_word_str(const BranchWord& w) {
    std::string out;
    for (const BranchLetter& l : w.letters) {
        if (!out.empty()) out += ' ';
        out += "b:";
        out += node_str(l.branch);
        out += l.sign > 0 ? ":+" : ":-";
    }
    return out;
}

int separation_depth(const BranchWord& w) {
    std::vector<Node> branches;
    for (const BranchLetter& l : w.letters) {
        if (std::find(branches.begin(), branches.end(), l.branch) == branches.end()) {
            branches.push_back(l.branch);
        }
    }
    if (branches.size() <= 1) return 0;
    int longest = 0;
    for (const Node& b : branches) longest = std::max(longest, b.lg());
    for (int d = 1; d <= longest; ++d) {
        bool distinct = true;
        for (size_t i = 0; i < branches.size() && distinct; ++i) {
            for (size_t j = i + 1; j < branches.size(); ++j) {
                if (prefix(branches[i], d) == prefix(branches[j], d)) {
                    distinct = false;
                    break;
                }
            }
        }
        if (distinct) return d;
    }
    throw Unreachable("distinct branches never separate");
}

namespace {

void require_branch(const Tower& t, const Node& nu) {
    if (nu.lg() < t.depth) {
        throw ParseError("branch '" + node_str(nu) + "' shorter than tower depth " +
                         std::to_string(t.depth));
    }
}

// Per-level actions of one word, resolved to generator tables once.
struct ResolvedWord {
    // letter index -> table per level, rightmost letter first.
    std::vector<std::vector<const Perm*>> tables;
};

ResolvedWord resolve(const Tower& t, const BranchWord& w) {
    for (const BranchLetter& l : w.letters) require_branch(t, l.branch);
    ResolvedWord r;
    r.tables.resize(t.levels.size());
    for (size_t li = 0; li < t.levels.size(); ++li) {
        const TowerLevel& L = t.levels[li];
        r.tables[li].reserve(w.letters.size());
        for (size_t i = w.letters.size(); i-- > 0;) {
            const BranchLetter& l = w.letters[i];
            size_t gen = lex_index(prefix(l.branch, L.node.lg()));
            r.tables[li].push_back(l.sign > 0 ? &L.f[gen] : &L.f_inv[gen]);
        }
    }
    return r;
}

} // namespace

uint64_t gstar_apply(const Tower& t, const Node& nu, uint64_t x, int sign) {
    require_branch(t, nu);
    auto [li, local] = t.locate(x);
    const TowerLevel& L = t.levels[li];
    size_t gen = lex_index(prefix(nu, L.node.lg()));
    uint32_t y = sign > 0 ? L.f[gen][local] : L.f_inv[gen][local];
    return L.global_base + y;
}

uint64_t eval_word(const Tower& t, const BranchWord& w, uint64_t x) {
    uint64_t y = x;
    for (size_t i = w.letters.size(); i-- > 0;) {
        y = gstar_apply(t, w.letters[i].branch, y, w.letters[i].sign);
    }
    return y;
}

Perm word_perm(const Tower& t, const BranchWord& w) {
    ResolvedWord r = resolve(t, w);
    Perm out(t.universe_size);
    for (size_t li = 0; li < t.levels.size(); ++li) {
        const TowerLevel& L = t.levels[li];
        for (uint32_t x = 0; x < L.size; ++x) {
            uint32_t y = x;
            for (const Perm* table : r.tables[li]) y = (*table)[y];
            out[L.global_base + x] = static_cast<uint32_t>(L.global_base) + y;
        }
    }
    return out;
}

FixedPointReport fixed_points(const Tower& t, const BranchWord& w) {
    FixedPointReport report;
    report.per_level.assign(t.levels.size(), 0);
    if (w.empty()) {
        report.trivial_word = true;
        report.total = t.universe_size;
        for (size_t li = 0; li < t.levels.size(); ++li) report.per_level[li] = t.levels[li].size;
        return report;
    }
    ResolvedWord r = resolve(t, w);
    for (size_t li = 0; li < t.levels.size(); ++li) {
        const TowerLevel& L = t.levels[li];
        uint64_t count = 0;
        for (uint32_t x = 0; x < L.size; ++x) {
            uint32_t y = x;
            for (const Perm* table : r.tables[li]) y = (*table)[y];
            if (y == x) ++count;
        }
        report.per_level[li] = count;
        report.total += count;
    }
    report.has_confinement = true;
    int least = 0;
    for (size_t li = 0; li < t.levels.size(); ++li) {
        if (report.per_level[li] > 0) least = t.levels[li].node.lg() + 1;
    }
    report.confinement_depth = least;
    return report;
}

bool confinement_check(const Tower& t, const BranchWord& w) {
    if (w.empty() || !branch_word_reduced(w)) {
        throw ParseError("confinement needs a reduced nontrivial branch word");
    }
    int bound = std::max(static_cast<int>(w.size()), separation_depth(w));
    FixedPointReport report = fixed_points(t, w);
    return report.confinement_depth <= bound;
}

} // namespace forge
