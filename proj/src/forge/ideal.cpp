#include "forge/ideal.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "forge/errors.hpp"

namespace forge {

namespace {

const Node& node_of(const Tower& t, uint64_t a) {
    if (a >= t.universe_size) {
        throw ParseError("element id " + std::to_string(a) + " outside the universe");
    }
    return t.levels[t.locate(a).first].node;
}

void require_witness_length(const Tower& t, const Node& rho) {
    if (rho.lg() < t.depth) {
        throw ParseError("witness '" + node_str(rho) + "' shorter than tower depth " +
                         std::to_string(t.depth));
    }
}

} // namespace

bool verify_witness(const Tower& t, const std::vector<uint64_t>& v, const Node& rho) {
    require_witness_length(t, rho);
    std::vector<uint64_t> sorted(v);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> pairs_at(static_cast<size_t>(t.depth) + 1, 0);
    for (uint64_t a : sorted) {
        int n = meet_len(rho, node_of(t, a));
        if (++pairs_at[static_cast<size_t>(n)] > 1) return false;
    }
    return true;
}

Node find_avoiding_node(const Tower& t, const std::vector<IdealGenerator>& gens) {
    if (gens.empty()) throw ParseError("need at least one ideal generator");
    for (size_t i = 0; i < gens.size(); ++i) {
        if (!verify_witness(t, gens[i].v, gens[i].witness)) {
            throw ParseError("generator " + std::to_string(i) +
                             " fails its witness property");
        }
    }

    int k = 1;
    while ((uint64_t{1} << k) <= gens.size()) ++k;
    if (k > t.depth) {
        throw DepthExceeded("avoiding prefix needs length " + std::to_string(k) +
                            " but the tower has depth " + std::to_string(t.depth));
    }

    Node eta;
    for (const Node& cand : nodes_of_length(static_cast<size_t>(k))) {
        bool clashes = false;
        for (const IdealGenerator& g : gens) {
            if (prefix(g.witness, k) == cand) {
                clashes = true;
                break;
            }
        }
        if (!clashes) {
            eta = cand;
            break;
        }
    }
    // 2^k exceeds the generator count, so some candidate always survives.
    if (eta.lg() != k) throw Unreachable("no avoiding prefix at length k");

    int needed = k;
    for (const IdealGenerator& g : gens) {
        int ki = meet_len(eta, g.witness);
        for (uint64_t a : g.v) {
            const Node& nd = node_of(t, a);
            if (meet_len(g.witness, nd) == ki) needed = std::max(needed, nd.lg() + 1);
        }
    }
    if (needed > t.depth) {
        throw DepthExceeded("avoiding node needs length " + std::to_string(needed) +
                            " but the tower has depth " + std::to_string(t.depth));
    }

    Node etap = zero_pad(eta, needed);
    size_t block = t.level_index(etap);
    for (const IdealGenerator& g : gens) {
        for (uint64_t a : g.v) {
            if (t.locate(a).first == block) {
                throw Unreachable("avoiding block still meets a generator");
            }
        }
    }
    return etap;
}

bool covered_by(const Tower& t, const std::vector<uint64_t>& x,
                const std::vector<IdealGenerator>& gens,
                const std::vector<uint64_t>& slack) {
    std::unordered_set<uint64_t> cover(slack.begin(), slack.end());
    for (const IdealGenerator& g : gens) cover.insert(g.v.begin(), g.v.end());
    for (uint64_t a : x) {
        (void)node_of(t, a);
        if (!cover.count(a)) return false;
    }
    return true;
}

std::vector<IdealGenerator> load_generators(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open generator file " + path);
    std::vector<IdealGenerator> gens;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string tag, bits;
        if (!(row >> tag >> bits) || tag != "GEN") {
            throw ParseError("line " + std::to_string(lineno) + ": want GEN <bits> <ids>");
        }
        IdealGenerator g;
        try {
            g.witness = parse_node(bits);
        } catch (const ParseError&) {
            throw ParseError("line " + std::to_string(lineno) + ": bad witness '" + bits + "'");
        }
        uint64_t id = 0;
        while (row >> id) g.v.push_back(id);
        if (!row.eof()) {
            throw ParseError("line " + std::to_string(lineno) + ": bad element id");
        }
        gens.push_back(std::move(g));
    }
    return gens;
}

} // namespace forge
