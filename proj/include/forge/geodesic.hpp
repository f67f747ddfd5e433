#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "forge/node.hpp"
#include "forge/tower.hpp"

namespace forge {

// One factor of a minimal decomposition: a generator named by its node label,
// raised to +1 or -1.
struct GeodesicStep {
    Node nu;
    int sign = +1;

    friend bool operator==(const GeodesicStep& a, const GeodesicStep& b) {
        return a.nu == b.nu && a.sign == b.sign;
    }
    friend bool operator!=(const GeodesicStep& a, const GeodesicStep& b) { return !(a == b); }
};

// A minimal word in the level generators carrying one element to another.
// The rightmost step acts first; step 0 is the outermost factor. Among the
// shortest words the step sequence is the least one under the step order
// (node length-then-lex, then sign with -1 before +1), compared position by
// position from step 0.
struct Geodesic {
    std::vector<GeodesicStep> steps;

    size_t length() const { return steps.size(); }
    bool empty() const { return steps.empty(); }
};

// Shortest-path machinery for one level, over the generator actions and
// their inverses.
class GeodesicEngine {
public:
    explicit GeodesicEngine(const TowerLevel& level);

    // Exact breadth-first distances from `a` to every element. Elements not
    // reachable are reported as UNREACHED.
    static constexpr uint32_t UNREACHED = ~uint32_t{0};
    std::vector<uint32_t> distances_from(uint32_t a) const;

    // The canonical minimal decomposition carrying a to b.
    Geodesic geodesic(uint32_t a, uint32_t b) const;

    uint32_t apply(const Geodesic& g, uint32_t a) const;

    const std::vector<Node>& labels() const { return labels_; }

private:
    const TowerLevel* level_;
    std::vector<Node> labels_;
};

// Convenience wrappers constructing a throwaway engine.
Geodesic level_geodesic(const TowerLevel& level, uint32_t a, uint32_t b);
uint32_t eval_geodesic(const TowerLevel& level, const Geodesic& g, uint32_t a);

// Exact census of distances over all ordered element pairs of a level.
// Costs one breadth-first sweep per element (quadratic overall); meant for
// desk-sized levels.
struct DistanceCensus {
    std::vector<uint64_t> histogram;  // histogram[d] = ordered pairs at distance d
    uint32_t diameter = 0;
};

DistanceCensus distance_census(const TowerLevel& level);

// "0110:+ 0011:-" step list; "-" names the root label, "(empty)" a trivial
// geodesic.
std::string geodesic_str(const Geodesic& g);

} // namespace forge
