#include "forge/word.hpp"

#include <cassert>
#include <sstream>

#include "forge/errors.hpp"

namespace forge {

bool letter_less(const Letter& a, const Letter& b) {
    if (a.gen != b.gen) return a.gen < b.gen;
    return a.sign < b.sign;
}

bool is_reduced(const Word& w) {
    for (size_t i = 0; i + 1 < w.letters.size(); ++i) {
        if (w.letters[i].gen == w.letters[i + 1].gen &&
            w.letters[i].sign == -w.letters[i + 1].sign) {
            return false;
        }
    }
    return true;
}

Word reduce(const Word& w) {
    Word out;
    out.alphabet_size = w.alphabet_size;
    for (const Letter& l : w.letters) {
        if (!out.letters.empty() && out.letters.back().gen == l.gen &&
            out.letters.back().sign == -l.sign) {
            out.letters.pop_back();
        } else {
            out.letters.push_back(l);
        }
    }
    return out;
}

Word inverse(const Word& w) {
    Word out;
    out.alphabet_size = w.alphabet_size;
    out.letters.reserve(w.letters.size());
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
        out.letters.push_back(Letter{it->gen, -it->sign});
    }
    return out;
}

Word concat(const Word& a, const Word& b) {
    assert(a.alphabet_size == b.alphabet_size);
    Word joined;
    joined.alphabet_size = a.alphabet_size;
    joined.letters = a.letters;
    joined.letters.insert(joined.letters.end(), b.letters.begin(), b.letters.end());
    return reduce(joined);
}

bool word_less(const Word& a, const Word& b) {
    if (a.letters.size() != b.letters.size()) return a.letters.size() < b.letters.size();
    for (size_t i = 0; i < a.letters.size(); ++i) {
        if (a.letters[i] != b.letters[i]) return letter_less(a.letters[i], b.letters[i]);
    }
    return false;
}

uint64_t reduced_word_count(int k, int max_len) {
    assert(k >= 1);
    uint64_t total = 0;
    uint64_t layer = 0;
    for (int l = 1; l <= max_len; ++l) {
        layer = (l == 1) ? uint64_t{2} * k : layer * (2 * k - 1);
        total += layer;
    }
    return total;
}

namespace {

// Letters in canonical order: (0,-1), (0,+1), (1,-1), ...
Letter nth_letter(int idx) {
    return Letter{idx / 2, (idx % 2 == 0) ? -1 : +1};
}

void extend(std::vector<Word>& out, const Word& prefix, int k, int len) {
    if (len == 0) {
        out.push_back(prefix);
        return;
    }
    for (int idx = 0; idx < 2 * k; ++idx) {
        Letter l = nth_letter(idx);
        if (!prefix.letters.empty() && prefix.letters.back().gen == l.gen &&
            prefix.letters.back().sign == -l.sign) {
            continue;
        }
        Word next = prefix;
        next.letters.push_back(l);
        extend(out, next, k, len - 1);
    }
}

} // namespace

std::vector<Word> enumerate_words(int k, int max_len, uint64_t cap) {
    assert(k >= 1 && max_len >= 0);
    uint64_t count = reduced_word_count(k, max_len);
    if (count > cap) {
        throw CapExceeded("enumerate_words: " + std::to_string(count) +
                          " words exceed cap " + std::to_string(cap));
    }
    std::vector<Word> out;
    out.reserve(count);
    Word empty;
    empty.alphabet_size = k;
    for (int len = 1; len <= max_len; ++len) extend(out, empty, k, len);
    return out;
}

Word y_seq(uint64_t n, int rank) {
    assert(n >= 1 && rank >= 1);
    Word out;
    out.alphabet_size = rank;
    if (rank >= 2) {
        for (uint64_t i = 0; i < n; ++i) out.letters.push_back(Letter{0, +1});
        for (uint64_t i = 0; i < n; ++i) out.letters.push_back(Letter{1, +1});
    } else {
        for (uint64_t i = 0; i < n; ++i) out.letters.push_back(Letter{0, +1});
    }
    return out;
}

std::string to_string(const Word& w) {
    std::string out;
    for (size_t i = 0; i < w.letters.size(); ++i) {
        if (i) out += ' ';
        out += (w.letters[i].sign > 0) ? 'g' : 'G';
        out += std::to_string(w.letters[i].gen);
    }
    return out;
}

Word parse_word(int alphabet_size, const std::string& text) {
    Word out;
    out.alphabet_size = alphabet_size;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        if (tok.size() < 2 || (tok[0] != 'g' && tok[0] != 'G')) {
            throw ParseError("bad word token '" + tok + "'");
        }
        int gen = 0;
        try {
            gen = std::stoi(tok.substr(1));
        } catch (const std::exception&) {
            throw ParseError("bad word token '" + tok + "'");
        }
        if (gen < 0 || gen >= alphabet_size) {
            throw ParseError("generator index out of range in token '" + tok + "'");
        }
        out.letters.push_back(Letter{gen, tok[0] == 'g' ? +1 : -1});
    }
    return out;
}

} // namespace forge
