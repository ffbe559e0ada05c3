#include "cam/decomposition.hpp"

#include <deque>

namespace cam {

TokenStream::TokenStream(const WordFamily& family, int n, int k)
    : family_(family), n_(n), k_(k) {
    if (n < 0 || n > family.max_level()) throw std::out_of_range("TokenStream: n out of range");
    if (k < 0 || k > family.max_level()) throw std::out_of_range("TokenStream: k out of range");
    if (2 * n <= 2 * k) {
        single_ = true;
    } else {
        stack_.push_back({2 * n, 0, 0});
    }
}

void TokenStream::push_word(int word, int copies) {
    // Either emit the word as tokens (index small enough) or expand it.
    if (word <= 2 * k_) {
        pending_token_ = word;
        pending_count_ = copies;
    } else {
        for (int c = 0; c < copies; ++c) stack_.push_back({word, 0, 0});
        // Copies of an expanded word are walked one after another; pushing
        // the same frame `copies` times keeps emission order correct because
        // each frame walks the full factor list independently.
    }
}

std::optional<Token> TokenStream::next() {
    if (done_) return std::nullopt;
    if (single_) {
        done_ = true;
        ++emitted_;
        return Token{2 * n_, emitted_, Nat(0)};
    }
    while (true) {
        if (pending_count_ > 0) {
            --pending_count_;
            Token t{pending_token_, ++emitted_, pos_};
            pos_ += family_.length(pending_token_);
            return t;
        }
        if (stack_.empty()) {
            done_ = true;
            return std::nullopt;
        }
        Frame& top = stack_.back();
        const auto fs = family_.factors(top.word);
        if (top.factor == fs.size()) {
            stack_.pop_back();
            continue;
        }
        const Factor f = fs[top.factor++];
        switch (f.kind) {
            case Factor::Base:
                pending_token_ = f.index;
                pending_count_ = 1;
                break;
            case Factor::Ref:
                push_word(f.index, 1);
                break;
            case Factor::Power:
                push_word(f.index, f.exponent);
                break;
        }
    }
}

DecompositionReport verify_decomposition_claims(const WordFamily& family, int n, int k) {
    DecompositionReport rep;
    rep.n = n;
    rep.k = k;
    rep.J = 2 * family.length(2 * k + 2);
    rep.max_gap = 0;

    TokenStream stream(family, n, k);
    const int target = 2 * k;

    int first_index = -1, prev_index = -1, last_index = -1;
    int64_t last_target = -1;  // ordinal of the most recent u_s = w_{2k}
    // Boundary pairs still waiting for a w_{2k} ahead; their backward gap is
    // already known to exceed what a token behind them could improve.
    std::deque<std::pair<int64_t, Nat>> pending;  // (ordinal t, backward gap or J+1)

    const Nat no_backward = rep.J + 1;
    while (auto tok = stream.next()) {
        const int64_t t = tok->ordinal;
        if (first_index < 0) first_index = tok->index;
        if (prev_index >= 0 && prev_index != tok->index) {
            const int64_t pair_at = t - 1;
            Nat backward = last_target >= 0 ? Nat(pair_at - last_target) : no_backward;
            if (backward > rep.J) backward = no_backward;
            pending.emplace_back(pair_at, std::move(backward));
        }
        if (tok->index == target) {
            last_target = t;
            while (!pending.empty()) {
                const Nat forward = Nat(t - pending.front().first);
                const Nat gap = std::min(pending.front().second, forward);
                if (gap > rep.max_gap) rep.max_gap = gap;
                ++rep.boundary_pairs;
                pending.pop_front();
            }
        }
        // Pairs whose forward search is hopeless resolve to their backward gap.
        while (!pending.empty() && Nat(t - pending.front().first) > rep.J) {
            if (pending.front().second > rep.max_gap) rep.max_gap = pending.front().second;
            ++rep.boundary_pairs;
            pending.pop_front();
        }
        prev_index = tok->index;
        last_index = tok->index;
    }
    for (auto& p : pending) {
        if (p.second > rep.max_gap) rep.max_gap = p.second;
        ++rep.boundary_pairs;
    }

    rep.h = stream.emitted();
    rep.first_last_ok = (first_index == target && last_index == target);
    rep.gap_ok = rep.max_gap <= rep.J;
    return rep;
}

void write_token_csv(std::ostream& os, const Token& t) {
    os << t.ordinal << ',' << t.index << ',' << t.start << '\n';
}

}  // namespace cam
