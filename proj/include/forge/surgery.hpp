#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "forge/gstar.hpp"
#include "forge/node.hpp"
#include "forge/perm.hpp"
#include "forge/tower.hpp"

namespace forge {

// The data that pins a surgered permutation: levels B, the two guiding
// branches, and per level the quintuple of touched elements plus the block
// receiving b_n. Levels where f already agrees with the branch permutation
// of its code are dropped at derivation time and listed in `dropped`.
struct SurgerySpec {
    std::vector<int> B;
    Node eta1;
    Node eta2;
    std::map<int, uint64_t> a;
    std::map<int, uint64_t> b;
    std::map<int, uint64_t> c;
    std::map<int, uint64_t> d;
    std::map<int, uint64_t> e;
    std::map<int, Node> nu;
    std::vector<int> dropped;
};

enum class CaseTag { Ka, Kb, Kc };

std::string case_name(CaseTag tag);

// Fills b, c, d, e, nu from f and the chosen elements: b_n = f(a_n), nu_n the
// block of b_n, e_n = F(a_n), c_n = F^{-1}(b_n), d_n = F(b_n) where F is the
// permutation named by f's code.
SurgerySpec derive_spec(const Tower& t, const Perm& f, const Node& eta1, const Node& eta2,
                        const std::vector<int>& B, const std::map<int, uint64_t>& a);

// The rewiring: start from the permutation named by f's code, then per level
// send a_n to b_n, b_n to e_n, c_n to d_n. Collisions and fixed points are
// errors, not silently repaired.
Perm build_g(const Tower& t, const Perm& f, const SurgerySpec& spec);

// Which disjunct the spec satisfies: Ka (blocks escape along eta2 with
// growing meets), Kb (in-block with growing decomposition lengths), Kc
// (in-block, constant length and signs, an incomparable label position).
CaseTag detect_case(const Tower& t, const SurgerySpec& spec, const Perm& f);

// Deterministic choice of a spec and its rewired permutation for f, driven
// by the classifier verdicts in fixed case priority.
std::pair<SurgerySpec, Perm> pick_g(const Tower& t, const Perm& f);

struct RecoveredWord {
    std::vector<BranchLetter> letters;     // one branch prefix of tower depth per letter
    std::vector<Node> exceptional_nodes;   // deepest-level nodes the word misses
};

// Per deepest-level block, the unique reduced generator word of length at
// most min(m_max, block depth) whose action equals h there; blocks with no
// such word are exceptional, allowed up to m! of them for letter count m.
RecoveredWord recover_word(const Tower& t, const Perm& h, int m_max);

// `SPEC` header line plus one line per level, for reports and tests.
std::vector<std::string> spec_lines(const SurgerySpec& spec);

} // namespace forge
