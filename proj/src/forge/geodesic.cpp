#include "forge/geodesic.hpp"

#include <algorithm>

#include "forge/errors.hpp"

namespace forge {

GeodesicEngine::GeodesicEngine(const TowerLevel& level)
    : level_(&level), labels_(nodes_of_length(static_cast<size_t>(level.node.lg()))) {}

std::vector<uint32_t> GeodesicEngine::distances_from(uint32_t a) const {
    const TowerLevel& L = *level_;
    std::vector<uint32_t> dist(L.size, UNREACHED);
    std::vector<uint32_t> frontier{a};
    std::vector<uint32_t> next;
    dist[a] = 0;
    uint32_t d = 0;
    while (!frontier.empty()) {
        ++d;
        next.clear();
        for (uint32_t x : frontier) {
            for (size_t i = 0; i < L.f.size(); ++i) {
                for (uint32_t y : {L.f[i][x], L.f_inv[i][x]}) {
                    if (dist[y] == UNREACHED) {
                        dist[y] = d;
                        next.push_back(y);
                    }
                }
            }
        }
        frontier.swap(next);
    }
    return dist;
}

Geodesic GeodesicEngine::geodesic(uint32_t a, uint32_t b) const {
    const TowerLevel& L = *level_;
    std::vector<uint32_t> dist = distances_from(a);
    if (dist[b] == UNREACHED) {
        throw Unreachable("no generator word carries " + std::to_string(a) + " to " +
                          std::to_string(b) + " at node " + node_str(L.node));
    }
    Geodesic g;
    g.steps.reserve(dist[b]);
    uint32_t cur = b;
    // Walk from the outermost factor inward: at each position take the least
    // step whose removal lands one breadth-first shell closer to a.
    for (uint32_t remaining = dist[b]; remaining > 0; --remaining) {
        bool took = false;
        for (size_t i = 0; i < L.f.size() && !took; ++i) {
            for (int sign : {-1, +1}) {
                uint32_t prev = sign > 0 ? L.f_inv[i][cur] : L.f[i][cur];
                if (dist[prev] == remaining - 1) {
                    g.steps.push_back(GeodesicStep{labels_[i], sign});
                    cur = prev;
                    took = true;
                    break;
                }
            }
        }
        if (!took) throw Unreachable("breadth-first shells inconsistent during descent");
    }
    // A shortest word can never contain an adjacent cancelling pair; the
    // descent above strictly decreases distance, so check defensively.
    for (size_t i = 0; i + 1 < g.steps.size(); ++i) {
        if (g.steps[i].nu == g.steps[i + 1].nu && g.steps[i].sign != g.steps[i + 1].sign) {
            throw Unreachable("cancelling pair in a shortest decomposition");
        }
    }
    return g;
}

uint32_t GeodesicEngine::apply(const Geodesic& g, uint32_t a) const {
    const TowerLevel& L = *level_;
    uint32_t x = a;
    for (size_t i = g.steps.size(); i-- > 0;) {
        const GeodesicStep& s = g.steps[i];
        size_t gen = lex_index(s.nu);
        x = s.sign > 0 ? L.f[gen][x] : L.f_inv[gen][x];
    }
    return x;
}

Geodesic level_geodesic(const TowerLevel& level, uint32_t a, uint32_t b) {
    return GeodesicEngine(level).geodesic(a, b);
}

uint32_t eval_geodesic(const TowerLevel& level, const Geodesic& g, uint32_t a) {
    return GeodesicEngine(level).apply(g, a);
}

DistanceCensus distance_census(const TowerLevel& level) {
    GeodesicEngine engine(level);
    DistanceCensus census;
    for (uint32_t a = 0; a < level.size; ++a) {
        std::vector<uint32_t> dist = engine.distances_from(a);
        for (uint32_t d : dist) {
            if (d == GeodesicEngine::UNREACHED) {
                throw Unreachable("level is not generated by its generator actions");
            }
            if (d >= census.histogram.size()) census.histogram.resize(d + 1, 0);
            ++census.histogram[d];
            census.diameter = std::max(census.diameter, d);
        }
    }
    return census;
}

std::string geodesic_str(const Geodesic& g) {
    if (g.steps.empty()) return "(empty)";
    std::string out;
    for (const GeodesicStep& s : g.steps) {
        if (!out.empty()) out += ' ';
        out += node_str(s.nu);
        out += s.sign > 0 ? ":+" : ":-";
    }
    return out;
}

} // namespace forge
