#pragma once

#include <cstdint>
#include <vector>

namespace forge {

// Deterministic splitmix64 generator. Used instead of <random> engines and
// distributions so that identical seeds reproduce identical builds on every
// platform and standard library.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform value in [0, n). Rejection-sampled to avoid modulo bias.
    uint64_t below(uint64_t n) {
        if (n == 0) return 0;
        uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % n);
        uint64_t v = next();
        while (v >= limit) v = next();
        return v % n;
    }

    // Derive an independent stream, e.g. one per retry attempt.
    Rng fork(uint64_t salt) {
        return Rng(next() ^ (salt * 0x9e3779b97f4a7c15ull + 0x632be59bd9b4e019ull));
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    uint64_t state_;
};

} // namespace forge
