#include <algorithm>
#include <cassert>

#include "forge/errors.hpp"
#include "forge/rng.hpp"
#include "forge/struct_group.hpp"
#include "forge/tower.hpp"

namespace forge {

std::string profile_name(Profile p) {
    return p == Profile::Strict ? "STRICT" : "DEMO";
}

Profile parse_profile(const std::string& text) {
    std::string up = text;
    std::transform(up.begin(), up.end(), up.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (up == "STRICT") return Profile::Strict;
    if (up == "DEMO") return Profile::Demo;
    throw ParseError("unknown profile '" + text + "' (expected strict or demo)");
}

const TowerLevel* Tower::find(const Node& node) const {
    for (const TowerLevel& l : levels) {
        if (l.node == node) return &l;
    }
    return nullptr;
}

const TowerLevel& Tower::at(const Node& node) const {
    const TowerLevel* l = find(node);
    if (!l) throw Unreachable("no level at node " + node_str(node));
    return *l;
}

size_t Tower::level_index(const Node& node) const {
    for (size_t i = 0; i < levels.size(); ++i) {
        if (levels[i].node == node) return i;
    }
    throw Unreachable("no level at node " + node_str(node));
}

std::pair<size_t, uint32_t> Tower::locate(uint64_t global_id) const {
    if (global_id >= universe_size) {
        throw Unreachable("element id " + std::to_string(global_id) + " outside universe");
    }
    size_t lo = 0, hi = levels.size();
    while (hi - lo > 1) {
        size_t mid = (lo + hi) / 2;
        if (levels[mid].global_base <= global_id) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {lo, static_cast<uint32_t>(global_id - levels[lo].global_base)};
}

uint64_t n1_for(const SizeSchedule& s, int lg, uint64_t ancestor_sum) {
    uint64_t factor = s.profile == Profile::Strict
                          ? uint64_t{1} << (lg + 7)
                          : s.beta;
    return std::max<uint64_t>(1, s.lambda * factor * ancestor_sum);
}

uint64_t n0_for(uint64_t n1, int lg) { return n1 >> lg; }

uint64_t aset_width(const SizeSchedule& s, uint64_t n1, uint64_t n0) {
    return s.profile == Profile::Strict ? n1 : n0;
}

uint64_t ancestor_chain_sum(const Tower& t, const Node& node) {
    uint64_t sum = 0;
    for (int i = 0; i < node.lg(); ++i) sum += t.at(prefix(node, i)).size;
    return sum;
}

Tower build_tower(const SizeSchedule& schedule, int depth, uint64_t seed) {
    if (depth < 0) throw ScheduleInfeasible("negative depth");
    if (depth > schedule.max_depth) {
        throw ScheduleInfeasible("depth " + std::to_string(depth) + " exceeds schedule limit " +
                                 std::to_string(schedule.max_depth));
    }
    Tower t;
    t.schedule = schedule;
    t.seed = seed;
    t.depth = depth;

    std::vector<Node> nodes = nodes_up_to(depth);
    uint64_t base = 0;
    for (size_t idx = 0; idx < nodes.size(); ++idx) {
        const Node& node = nodes[idx];
        int lg = node.lg();
        int k = 1 << lg;

        TowerLevel level;
        level.node = node;
        level.global_base = base;
        uint64_t anc = ancestor_chain_sum(t, node);
        level.n1 = n1_for(schedule, lg, anc);
        level.n0 = n0_for(level.n1, lg);
        level.lsep = std::min(lg, schedule.lsep_cap);
        uint64_t width = aset_width(schedule, level.n1, level.n0);
        uint64_t N = static_cast<uint64_t>(k) * width;

        uint64_t node_seed = Rng(seed).fork(idx).next();
        StructLevel built =
            struct_separate(k, level.lsep, N, schedule.max_group, node_seed);
        level.size = built.G.size();
        level.cert = LevelCert{"STRUCT", built.G.P, built.seed};

        level.f.reserve(static_cast<size_t>(k));
        level.f_inv.reserve(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) {
            Perm table = struct_left_table(built, static_cast<size_t>(i));
            level.f_inv.push_back(inverse_perm(table));
            level.f.push_back(std::move(table));
        }

        level.A.resize(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) {
            std::vector<uint32_t>& set = level.A[static_cast<size_t>(i)];
            set.reserve(width);
            uint64_t first = 1 + static_cast<uint64_t>(i) * width;
            for (uint64_t n = first; n < first + width; ++n) {
                set.push_back(static_cast<uint32_t>(struct_y_elem(built, n)));
            }
            std::sort(set.begin(), set.end());
            assert(std::adjacent_find(set.begin(), set.end()) == set.end());
        }

        base += level.size;
        t.levels.push_back(std::move(level));
    }
    t.universe_size = base;
    return t;
}

} // namespace forge
