#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "forge/errors.hpp"

namespace forge {

// A finite 0/1 sequence addressing one block of the universe. The root is
// the empty sequence, printed "-".
struct Node {
    std::vector<uint8_t> bits;

    int lg() const { return static_cast<int>(bits.size()); }
    bool operator==(const Node& o) const { return bits == o.bits; }
    bool operator!=(const Node& o) const { return bits != o.bits; }
};

// Length-then-lexicographic order: negative, zero, positive as a <_> b.
inline int star_compare(const Node& a, const Node& b) {
    if (a.lg() != b.lg()) return a.lg() < b.lg() ? -1 : 1;
    if (a.bits < b.bits) return -1;
    if (a.bits > b.bits) return 1;
    return 0;
}

inline bool star_less(const Node& a, const Node& b) { return star_compare(a, b) < 0; }

inline bool is_prefix(const Node& p, const Node& of) {
    if (p.lg() > of.lg()) return false;
    for (size_t i = 0; i < p.bits.size(); ++i) {
        if (p.bits[i] != of.bits[i]) return false;
    }
    return true;
}

// Length of the longest common prefix.
inline int meet_len(const Node& a, const Node& b) {
    int n = std::min(a.lg(), b.lg());
    for (int i = 0; i < n; ++i) {
        if (a.bits[static_cast<size_t>(i)] != b.bits[static_cast<size_t>(i)]) return i;
    }
    return n;
}

inline Node prefix(const Node& a, int len) {
    Node p;
    p.bits.assign(a.bits.begin(),
                  a.bits.begin() + static_cast<ptrdiff_t>(std::min(len, a.lg())));
    return p;
}

inline std::string node_str(const Node& n) {
    if (n.bits.empty()) return "-";
    std::string s;
    for (uint8_t b : n.bits) s += b ? '1' : '0';
    return s;
}

// Accepts "-" for the root or a nonempty string of 0s and 1s.
inline Node parse_node(const std::string& s) {
    Node n;
    if (s == "-") return n;
    if (s.empty()) throw ParseError("empty node");
    for (char c : s) {
        if (c != '0' && c != '1') throw ParseError("bad node bits: " + s);
        n.bits.push_back(c == '1');
    }
    return n;
}

// All length-len nodes in lexicographic order.
inline std::vector<Node> nodes_of_length(size_t len) {
    std::vector<Node> out;
    out.reserve(size_t{1} << len);
    for (uint64_t m = 0; m < (uint64_t{1} << len); ++m) {
        Node n;
        for (size_t i = 0; i < len; ++i) {
            n.bits.push_back((m >> (len - 1 - i)) & 1);
        }
        out.push_back(std::move(n));
    }
    return out;
}

// All nodes of length <= depth in star order.
inline std::vector<Node> nodes_up_to(size_t depth) {
    std::vector<Node> out;
    for (size_t len = 0; len <= depth; ++len) {
        auto layer = nodes_of_length(len);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

// Index of a length-len node among nodes_of_length(len).
inline size_t lex_index(const Node& n) {
    size_t v = 0;
    for (uint8_t b : n.bits) v = v * 2 + b;
    return v;
}

inline Node zero_pad(const Node& n, int len) {
    Node out = n;
    while (out.lg() < len) out.bits.push_back(0);
    return out;
}

} // namespace forge
