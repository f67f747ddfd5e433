#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace forge {

// One signed generator occurrence. `gen` indexes the alphabet; `sign` is
// +1 or -1. At a tower level, generator index i stands for the i-th
// length-n bit string in lexicographic order.
struct Letter {
    int gen = 0;
    int sign = +1;

    friend bool operator==(const Letter& a, const Letter& b) {
        return a.gen == b.gen && a.sign == b.sign;
    }
    friend bool operator!=(const Letter& a, const Letter& b) { return !(a == b); }
};

// Canonical letter order: by generator index, then sign with -1 first.
bool letter_less(const Letter& a, const Letter& b);

// A word over `alphabet_size` generators. Operations that promise reduced
// output never leave an adjacent inverse pair in `letters`.
struct Word {
    int alphabet_size = 1;
    std::vector<Letter> letters;

    size_t length() const { return letters.size(); }
    bool empty() const { return letters.empty(); }

    friend bool operator==(const Word& a, const Word& b) {
        return a.alphabet_size == b.alphabet_size && a.letters == b.letters;
    }
    friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }
};

bool is_reduced(const Word& w);

// Free reduction: repeatedly deletes adjacent inverse pairs. Idempotent.
Word reduce(const Word& w);

// Formal inverse (reverses letters and flips signs; reduced if input is).
Word inverse(const Word& w);

// Concatenation followed by reduction. Both words must share an alphabet.
Word concat(const Word& a, const Word& b);

// Length-then-lexicographic order over letter sequences, with letter_less
// breaking ties position by position. This is the fixed canonical order
// used everywhere a least word or least step sequence is required.
bool word_less(const Word& a, const Word& b);

// Number of reduced words of length 1..max_len over k generators:
// sum over l of 2k * (2k-1)^(l-1).
uint64_t reduced_word_count(int k, int max_len);

// All reduced words of length 1..max_len over k generators, each exactly
// once, in the canonical word order. Throws CapExceeded if the closed-form
// count exceeds `cap`.
std::vector<Word> enumerate_words(int k, int max_len, uint64_t cap = uint64_t{1} << 22);

// The n-th member of the designated free family: a^n b^n over the first
// two generators when rank >= 2, x^n when rank == 1. Requires n >= 1.
Word y_seq(uint64_t n, int rank);

// Space-separated token form: `g<i>` for sign +1, `G<i>` for sign -1.
// The empty word serializes as the empty string.
std::string to_string(const Word& w);
Word parse_word(int alphabet_size, const std::string& text);

} // namespace forge
