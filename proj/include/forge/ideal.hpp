#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "forge/node.hpp"
#include "forge/tower.hpp"

namespace forge {

// One generator of the block-avoidance ideal: a finite element set together
// with the branch witnessing that no two of its elements sit at the same
// meet distance from that branch.
struct IdealGenerator {
    std::vector<uint64_t> v;  // global element ids
    Node witness;             // rho_v, at least as long as the tower is deep
};

// True iff for every n, at most one pair (element, its block node) from v
// has meet length exactly n against rho.
bool verify_witness(const Tower& t, const std::vector<uint64_t>& v, const Node& rho);

// The least block guaranteed disjoint from every generator's element set:
// pick the least length k with 2^k > generator count, take the least
// length-k node avoiding every witness truncation, then extend it past the
// node length of each generator's unique witnessing pair at its meet level.
Node find_avoiding_node(const Tower& t, const std::vector<IdealGenerator>& gens);

// Desk-scale ideal membership: every element of x lies in the slack set or
// in some generator's element set.
bool covered_by(const Tower& t, const std::vector<uint64_t>& x,
                const std::vector<IdealGenerator>& gens,
                const std::vector<uint64_t>& slack);

// Lines of the form `GEN <rho-bits> <gid gid ...>` (ids optional), one
// generator per line; '#' starts a comment line.
std::vector<IdealGenerator> load_generators(const std::string& path);

} // namespace forge
