#pragma once

#include "cam/word_family.hpp"

#include <cstdint>
#include <optional>
#include <ostream>

namespace cam {

// One positioned token u_t of the rewriting of w_{2n} over {w_0, ..., w_{2k}}.
struct Token {
    int index;        // word index, always <= 2k
    int64_t ordinal;  // 1-based position t in u_1 ... u_h
    Nat start;        // absolute offset of the token in w_{2n}
};

// Streams the decomposition of w_{2n} into tokens drawn from {w_0,...,w_{2k}}:
// every factor with index > 2k is replaced by its recurrence factors, the same
// rule applied whether the word occurs standalone or nested, until all token
// indices are <= 2k. Tokens come out left to right and are never buffered.
class TokenStream {
public:
    TokenStream(const WordFamily& family, int n, int k);

    std::optional<Token> next();

    int n() const { return n_; }
    int k() const { return k_; }
    int64_t emitted() const { return emitted_; }

private:
    struct Frame {
        int word;            // word index whose factors we are walking
        std::size_t factor;  // next factor position
        int copies_left;     // >0 while re-entering the same word as a power
    };

    void push_word(int word, int copies);

    const WordFamily& family_;
    int n_, k_;
    int64_t emitted_ = 0;
    Nat pos_ = 0;
    std::vector<Frame> stack_;
    // Pending repeats of a token-sized word (from powers w_i^e with i <= 2k).
    int pending_token_ = -1;
    int pending_count_ = 0;
    bool single_ = false;  // 2n <= 2k: w_{2n} is its own decomposition
    bool done_ = false;
};

struct DecompositionReport {
    int n = 0, k = 0;
    int64_t h = 0;        // token count
    Nat J;                // 2 |w_{2k+2}|
    bool first_last_ok = false;
    // Largest token-distance from a boundary pair u_t != u_{t+1} to the
    // nearest u_s = w_{2k}; saturates at J+1 when no such s exists in range.
    Nat max_gap;
    bool gap_ok = false;
    int64_t boundary_pairs = 0;
};

// Single streaming pass over the decomposition of w_{2n}, checking
//   u_1 = u_h = w_{2k}    and
//   every boundary pair u_t u_{t+1} = w_i w_j, i != j, has some u_s = w_{2k}
//   with |s - t| <= J = 2|w_{2k+2}|.
DecompositionReport verify_decomposition_claims(const WordFamily& family, int n, int k);

// CSV row "ordinal,index,start".
void write_token_csv(std::ostream& os, const Token& t);

}  // namespace cam
