#pragma once

#include "cam/nat.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cam {

// Letters are the chars '0' and '1'; words are plain std::strings over them.
using Letter = char;

// The family w_0 = "0", w_1 = "1",
//   w_{2n+a} = w_{2n-2} w_a w_{2n-2} (w_0^n w_{2n-2}) (w_1^n w_{2n-2}) ... (w_{2n-1}^n w_{2n-2})
// for n >= 1, a in {0,1}. Words are indexed by n (level = n/2, parity = n%2).
//
// Each w_n with n >= 2 is stored as a symbolic factor list with cumulative
// arbitrary-precision offsets, so single letters and ranges can be resolved
// without materializing anything.

struct Factor {
    enum Kind : uint8_t { Base, Ref, Power };
    Kind kind;
    int index;          // word index for Ref/Power, letter value (0/1) for Base
    int exponent;       // Power only
};

class CapExceeded : public std::runtime_error {
public:
    CapExceeded(const std::string& what, Nat required)
        : std::runtime_error(what), required_cap(std::move(required)) {}
    Nat required_cap;
};

class WordFamily {
public:
    static constexpr std::size_t kDefaultMaterializeCap = 100'000'000;  // letters

    explicit WordFamily(int max_level,
                        std::size_t materialize_cap = kDefaultMaterializeCap);

    int max_level() const { return max_level_; }
    int max_index() const { return 2 * max_level_ + 1; }
    std::size_t materialize_cap() const { return materialize_cap_; }

    // |w_n|, from the cached length ledger.
    const Nat& length(int n) const;

    bool materializable(int n) const { return fits_size(length(n), materialize_cap_); }

    // w_n[i] without materialization; O(level * log level) per query.
    Letter letter_at(int n, const Nat& i) const;

    // Full letter sequence of w_n. Throws CapExceeded (carrying the needed
    // cap) when |w_n| exceeds the materialization cap.
    std::string materialize(int n) const;

    // Appends w_n[start .. start+len) to out, descending the factor lists.
    void extract(int n, const Nat& start, std::size_t len, std::string& out) const;
    std::string extract(int n, const Nat& start, std::size_t len) const;

    // Positions where w_{2n} and w_{2n+1} differ, by streamed full scan.
    // The construction forces exactly { |w_{2n-2}| }; anything else throws,
    // since it would mean the family itself is broken.
    std::vector<Nat> diff_positions(int level) const;

    // Letter of a periodic point w_base^Z at (possibly negative) position.
    Letter periodic_letter(int base, const Nat& pos) const;

    std::span<const Factor> factors(int n) const;
    // Cumulative factor offsets of w_n: size factors+1, starts at 0, ends at |w_n|.
    const std::vector<Nat>& factor_offsets(int n) const;

private:
    void check_index(int n) const;
    const std::string* cached(int n) const;

    int max_level_;
    std::size_t materialize_cap_;
    std::vector<Nat> lengths_;                       // by word index
    std::vector<std::vector<Factor>> factors_;       // by word index (empty for n<=1)
    std::vector<std::vector<Nat>> offsets_;          // cumulative, by word index
    std::vector<std::string> small_words_;           // eager materializations
    static constexpr std::size_t kSmallWordCap = 1'000'000;
};

}  // namespace cam
