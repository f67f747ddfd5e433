#include "forge/quotient.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

#include "forge/errors.hpp"
#include "forge/rng.hpp"

namespace forge {

SeparationStrategy SeparationStrategy::ball(int r) {
    SeparationStrategy s;
    s.kind = Kind::Ball;
    s.radius = r;
    return s;
}

SeparationStrategy SeparationStrategy::random(size_t m, uint64_t seed, int tries) {
    SeparationStrategy s;
    s.kind = Kind::Random;
    s.degree = m;
    s.seed = seed;
    s.tries = tries;
    return s;
}

std::vector<Perm> closure(size_t degree, const std::vector<Perm>& gens, size_t cap) {
    for (const Perm& g : gens) {
        assert(g.size() == degree);
        (void)g;
    }
    std::vector<Perm> edges = gens;
    for (const Perm& g : gens) edges.push_back(inverse_perm(g));

    std::vector<Perm> elements{identity_perm(degree)};
    std::unordered_map<Perm, uint32_t, PermHash> seen;
    seen.emplace(elements[0], 0);
    if (elements.size() > cap) {
        throw CapExceeded("closure: cap " + std::to_string(cap) + " exceeded");
    }

    std::vector<Perm> frontier = elements;
    while (!frontier.empty()) {
        std::vector<Perm> layer;
        for (const Perm& e : frontier) {
            for (const Perm& g : edges) {
                Perm p = compose(g, e);
                if (seen.find(p) == seen.end()) {
                    seen.emplace(p, 0);
                    layer.push_back(std::move(p));
                }
            }
        }
        std::sort(layer.begin(), layer.end());
        for (Perm& p : layer) {
            elements.push_back(std::move(p));
            if (elements.size() > cap) {
                throw CapExceeded("closure: cap " + std::to_string(cap) + " exceeded");
            }
        }
        frontier = std::vector<Perm>(elements.end() - static_cast<ptrdiff_t>(layer.size()),
                                     elements.end());
        if (layer.empty()) break;
    }
    return elements;
}

FiniteGroupRep make_group(size_t degree, std::vector<Perm> gens, size_t cap) {
    FiniteGroupRep G;
    G.degree = degree;
    G.elements = closure(degree, gens, cap);
    G.gens = std::move(gens);
    for (const Perm& g : G.gens) G.gen_invs.push_back(inverse_perm(g));
    G.index_of.reserve(G.elements.size());
    for (size_t i = 0; i < G.elements.size(); ++i) {
        G.index_of.emplace(G.elements[i], static_cast<uint32_t>(i));
    }
    return G;
}

BallAction ball_action(int k, int r) {
    assert(k >= 1 && r >= 1);
    BallAction B;
    B.points.push_back(Word{k, {}});
    auto rest = enumerate_words(k, r);
    B.points.insert(B.points.end(), rest.begin(), rest.end());
    B.degree = B.points.size();

    std::map<Word, uint32_t, bool (*)(const Word&, const Word&)> point_index(word_less);
    for (size_t i = 0; i < B.points.size(); ++i) {
        point_index.emplace(B.points[i], static_cast<uint32_t>(i));
    }
    B.base = point_index.at(Word{k, {}});

    for (int g = 0; g < k; ++g) {
        for (int sign : {+1, -1}) {
            Perm table(B.degree, UINT32_MAX);
            std::vector<bool> hit(B.degree, false);
            Word letter{k, {Letter{g, sign}}};
            for (size_t i = 0; i < B.points.size(); ++i) {
                Word image = reduce(concat(letter, B.points[i]));
                auto it = point_index.find(image);
                if (it != point_index.end()) {
                    table[i] = it->second;
                    hit[it->second] = true;
                }
            }
            std::vector<uint32_t> sources;
            std::vector<uint32_t> targets;
            for (uint32_t i = 0; i < B.degree; ++i) {
                if (table[i] == UINT32_MAX) sources.push_back(i);
                if (!hit[i]) targets.push_back(i);
            }
            assert(sources.size() == targets.size());
            for (size_t i = 0; i < sources.size(); ++i) table[sources[i]] = targets[i];
            assert(is_permutation(table));
            if (sign > 0) {
                B.gens.push_back(std::move(table));
            } else {
                B.gen_invs.push_back(std::move(table));
            }
        }
    }
    return B;
}

namespace {

std::vector<Word> sorted_unique(std::vector<Word> S) {
    std::sort(S.begin(), S.end(), word_less);
    S.erase(std::unique(S.begin(), S.end()), S.end());
    return S;
}

// All images pairwise distinct, and distinct from the identity image of the
// empty word. Returns the offending pair on failure.
bool images_injective(const std::vector<Word>& S, const std::vector<Perm>& gens,
                      const std::vector<Perm>& gen_invs, size_t degree,
                      std::string* offender) {
    std::unordered_map<Perm, const Word*, PermHash> images;
    images.emplace(identity_perm(degree), nullptr);
    for (const Word& w : S) {
        Perm p = word_to_perm(w, gens, gen_invs, degree);
        auto [it, inserted] = images.emplace(std::move(p), &w);
        if (!inserted && !(w.empty() && it->second == nullptr)) {
            if (offender) {
                const Word* other = it->second;
                *offender = to_string(w) + " collides with " +
                            (other ? to_string(*other) : std::string("the empty word"));
            }
            return false;
        }
    }
    return true;
}

std::pair<FiniteGroupRep, SeparationCertificate>
certify(int k, std::vector<Word> S, std::vector<Perm> gens, size_t degree,
        std::string method, size_t cap) {
    FiniteGroupRep G = make_group(degree, std::move(gens), cap);
    SeparationCertificate cert;
    cert.method = std::move(method);
    cert.separated = std::move(S);
    cert.witness.reserve(cert.separated.size());
    for (const Word& w : cert.separated) {
        Perm p = word_to_perm(w, G.gens, G.gen_invs, G.degree);
        cert.witness.push_back(G.index_of.at(p));
    }
    (void)k;
    return {std::move(G), std::move(cert)};
}

} // namespace

std::pair<FiniteGroupRep, SeparationCertificate>
separate(int k, const std::vector<Word>& S, const SeparationStrategy& strategy, size_t cap) {
    std::vector<Word> words = sorted_unique(S);
    for (const Word& w : words) {
        for (const Letter& l : w.letters) {
            assert(l.gen >= 0 && l.gen < k);
            (void)l;
        }
    }

    if (strategy.kind == SeparationStrategy::Kind::Ball) {
        BallAction B = ball_action(k, strategy.radius);
        std::string offender;
        if (!images_injective(words, B.gens, B.gen_invs, B.degree, &offender)) {
            throw SearchExhausted("separate: radius " + std::to_string(strategy.radius) +
                                  " ball does not separate: " + offender);
        }
        std::ostringstream method;
        method << "BALL(" << strategy.radius << ")";
        return certify(k, std::move(words), B.gens, B.degree, method.str(), cap);
    }

    Rng rng(strategy.seed);
    for (int attempt = 0; attempt < strategy.tries; ++attempt) {
        std::vector<Perm> gens;
        std::vector<Perm> gen_invs;
        for (int g = 0; g < k; ++g) {
            Perm p = identity_perm(strategy.degree);
            rng.shuffle(p);
            gen_invs.push_back(inverse_perm(p));
            gens.push_back(std::move(p));
        }
        if (images_injective(words, gens, gen_invs, strategy.degree, nullptr)) {
            std::ostringstream method;
            method << "RANDOM(" << strategy.degree << ", " << strategy.seed << ")";
            return certify(k, std::move(words), std::move(gens), strategy.degree,
                           method.str(), cap);
        }
    }
    throw SearchExhausted("separate: no injective map of degree " +
                          std::to_string(strategy.degree) + " in " +
                          std::to_string(strategy.tries) + " tries");
}

Perm left_mult_table(const FiniteGroupRep& G, uint32_t g) {
    Perm table(G.elements.size());
    const Perm& left = G.elements[g];
    for (size_t j = 0; j < G.elements.size(); ++j) {
        table[j] = G.index_of.at(compose(left, G.elements[j]));
    }
    return table;
}

} // namespace forge
