#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "forge/node.hpp"
#include "forge/perm.hpp"

namespace forge {

enum class Profile { Strict, Demo };

std::string profile_name(Profile p);
Profile parse_profile(const std::string& text);

// Level-size policy. Block sizes grow along each branch: the target size of a
// level is driven by the total size of its ancestor chain, scaled by lambda
// and a per-profile growth factor (2^(depth+7) strict, beta demo).
struct SizeSchedule {
    Profile profile = Profile::Demo;
    uint64_t lambda = 2;
    uint64_t beta = 2;
    uint64_t max_group = uint64_t{1} << 22;  // hard cap on one block
    int max_depth = 2;
    int lsep_cap = 2;  // horizon for the word-separation requirement
};

struct LevelCert {
    std::string method;  // construction family, e.g. "STRUCT"
    uint64_t param = 0;  // group modulus
    uint64_t seed = 0;   // reproduces the accepted draw
};

// One block of the tower: the finite group at one binary node, its generator
// actions (one per node of the same length, in lexicographic order), and the
// marked subsets A (one per node of the same length, same order).
struct TowerLevel {
    Node node;
    uint64_t size = 0;
    uint64_t global_base = 0;
    std::vector<Perm> f;
    std::vector<Perm> f_inv;
    std::vector<std::vector<uint32_t>> A;
    LevelCert cert;
    uint64_t n1 = 0;
    uint64_t n0 = 0;
    int lsep = 0;
};

struct Tower {
    SizeSchedule schedule;
    uint64_t seed = 0;
    int depth = 0;
    std::vector<TowerLevel> levels;  // length-then-lex order
    uint64_t universe_size = 0;

    const TowerLevel* find(const Node& node) const;
    const TowerLevel& at(const Node& node) const;
    size_t level_index(const Node& node) const;
    // Map a global element id to (level index, local index).
    std::pair<size_t, uint32_t> locate(uint64_t global_id) const;
};

// Schedule arithmetic, shared by the builder and the verifier.
uint64_t n1_for(const SizeSchedule& s, int lg, uint64_t ancestor_sum);
uint64_t n0_for(uint64_t n1, int lg);
uint64_t aset_width(const SizeSchedule& s, uint64_t n1, uint64_t n0);
uint64_t ancestor_chain_sum(const Tower& t, const Node& node);

Tower build_tower(const SizeSchedule& schedule, int depth, uint64_t seed);

struct VerifyReport {
    bool ok = true;
    std::vector<std::string> violations;
    struct LevelMargin {
        Node node;
        uint64_t size = 0;
        uint64_t anc_sum = 0;
        uint64_t n1 = 0;
        uint64_t n0 = 0;
        uint64_t aset = 0;
    };
    std::vector<LevelMargin> margins;
};

VerifyReport verify_tower(const Tower& t);

void save_tower(const Tower& t, const std::string& path);
Tower load_tower(const std::string& path);
std::string tower_to_json(const Tower& t);

} // namespace forge
