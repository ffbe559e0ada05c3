#include "cam/word_family.hpp"

#include <algorithm>
#include <cassert>

namespace cam {

WordFamily::WordFamily(int max_level, std::size_t materialize_cap)
    : max_level_(max_level), materialize_cap_(materialize_cap) {
    if (max_level < 0) throw std::invalid_argument("max_level must be >= 0");
    const int count = 2 * max_level + 2;
    lengths_.reserve(count);
    factors_.resize(count);
    offsets_.resize(count);

    lengths_.push_back(1);  // w_0 = "0"
    lengths_.push_back(1);  // w_1 = "1"
    for (int n = 1; n <= max_level; ++n) {
        for (int a = 0; a < 2; ++a) {
            const int idx = 2 * n + a;
            std::vector<Factor>& fs = factors_[idx];
            fs.push_back({Factor::Ref, 2 * n - 2, 0});
            fs.push_back({Factor::Base, a, 0});
            fs.push_back({Factor::Ref, 2 * n - 2, 0});
            for (int k = 0; k < 2 * n; ++k) {
                fs.push_back({Factor::Power, k, n});
                fs.push_back({Factor::Ref, 2 * n - 2, 0});
            }
            std::vector<Nat>& offs = offsets_[idx];
            offs.reserve(fs.size() + 1);
            Nat pos = 0;
            offs.push_back(pos);
            for (const Factor& f : fs) {
                switch (f.kind) {
                    case Factor::Base: pos += 1; break;
                    case Factor::Ref: pos += lengths_[f.index]; break;
                    case Factor::Power: pos += lengths_[f.index] * f.exponent; break;
                }
                offs.push_back(pos);
            }
            lengths_.push_back(pos);
        }
    }

    // Eagerly materialize every word small enough for hot paths to bottom
    // out on; extraction then degenerates to substring copies.
    small_words_.resize(count);
    small_words_[0] = "0";
    small_words_[1] = "1";
    for (int n = 2; n < count; ++n) {
        if (!fits_size(lengths_[n], kSmallWordCap)) continue;
        std::string w;
        w.reserve(to_size(lengths_[n]));
        for (const Factor& f : factors_[n]) {
            switch (f.kind) {
                case Factor::Base:
                    w.push_back(static_cast<char>('0' + f.index));
                    break;
                case Factor::Ref:
                    w += small_words_[f.index];
                    break;
                case Factor::Power:
                    for (int e = 0; e < f.exponent; ++e) w += small_words_[f.index];
                    break;
            }
        }
        assert(Nat(w.size()) == lengths_[n]);
        small_words_[n] = std::move(w);
    }
}

void WordFamily::check_index(int n) const {
    if (n < 0 || n > max_index())
        throw std::out_of_range("word index " + std::to_string(n) +
                                " out of range (max " + std::to_string(max_index()) + ")");
}

const Nat& WordFamily::length(int n) const {
    check_index(n);
    return lengths_[n];
}

std::span<const Factor> WordFamily::factors(int n) const {
    check_index(n);
    return factors_[n];
}

const std::vector<Nat>& WordFamily::factor_offsets(int n) const {
    check_index(n);
    return offsets_[n];
}

const std::string* WordFamily::cached(int n) const {
    return small_words_[n].empty() && n >= 2 ? nullptr : &small_words_[n];
}

Letter WordFamily::letter_at(int n, const Nat& i) const {
    check_index(n);
    if (i < 0 || i >= lengths_[n]) throw std::out_of_range("letter_at: position out of bounds");
    int cur = n;
    Nat pos = i;
    while (cur >= 2) {
        if (const std::string* w = cached(cur)) return (*w)[to_size(pos)];
        const std::vector<Nat>& offs = offsets_[cur];
        // Factor holding pos: greatest f with offs[f] <= pos.
        auto it = std::upper_bound(offs.begin(), offs.end(), pos);
        const std::size_t f = static_cast<std::size_t>(it - offs.begin()) - 1;
        const Factor& fac = factors_[cur][f];
        Nat local = pos - offs[f];
        switch (fac.kind) {
            case Factor::Base:
                return static_cast<char>('0' + fac.index);
            case Factor::Ref:
                cur = fac.index;
                pos = std::move(local);
                break;
            case Factor::Power:
                cur = fac.index;
                pos = local % lengths_[fac.index];
                break;
        }
    }
    return static_cast<char>('0' + cur);
}

void WordFamily::extract(int n, const Nat& start, std::size_t len, std::string& out) const {
    check_index(n);
    if (len == 0) return;
    if (start < 0 || start + Nat(len) > lengths_[n])
        throw std::out_of_range("extract: range out of bounds");
    if (const std::string* w = cached(n)) {
        out.append(*w, to_size(start), len);
        return;
    }
    const std::vector<Nat>& offs = offsets_[n];
    const Nat end = start + Nat(len);
    auto it = std::upper_bound(offs.begin(), offs.end(), start);
    std::size_t f = static_cast<std::size_t>(it - offs.begin()) - 1;
    Nat pos = start;
    while (pos < end) {
        const Factor& fac = factors_[n][f];
        const Nat fac_end = offs[f + 1];
        const Nat take_n = (end < fac_end ? end : fac_end) - pos;
        const std::size_t take = to_size(take_n);
        Nat local = pos - offs[f];
        switch (fac.kind) {
            case Factor::Base:
                out.push_back(static_cast<char>('0' + fac.index));
                break;
            case Factor::Ref:
                extract(fac.index, local, take, out);
                break;
            case Factor::Power: {
                const Nat& unit = lengths_[fac.index];
                Nat in_copy = local % unit;
                std::size_t remaining = take;
                while (remaining > 0) {
                    const Nat room = unit - in_copy;
                    const std::size_t chunk =
                        fits_size(room, remaining) ? to_size(room) : remaining;
                    extract(fac.index, in_copy, chunk, out);
                    remaining -= chunk;
                    in_copy = 0;
                }
                break;
            }
        }
        pos += take_n;
        ++f;
    }
}

std::string WordFamily::extract(int n, const Nat& start, std::size_t len) const {
    std::string out;
    out.reserve(len);
    extract(n, start, len, out);
    return out;
}

std::string WordFamily::materialize(int n) const {
    check_index(n);
    if (!materializable(n))
        throw CapExceeded("materialize: |w_" + std::to_string(n) + "| = " +
                              to_string(lengths_[n]) + " exceeds cap " +
                              std::to_string(materialize_cap_),
                          lengths_[n]);
    return extract(n, 0, to_size(lengths_[n]));
}

std::vector<Nat> WordFamily::diff_positions(int level) const {
    if (level < 1 || level > max_level_)
        throw std::out_of_range("diff_positions: level out of range");
    const int even = 2 * level, odd = 2 * level + 1;
    if (lengths_[even] != lengths_[odd])
        throw std::logic_error("diff_positions: length mismatch between parities");
    if (!fits_size(lengths_[even], materialize_cap_))
        throw CapExceeded("diff_positions: scan longer than cap", lengths_[even]);

    std::vector<Nat> diffs;
    const std::size_t total = to_size(lengths_[even]);
    constexpr std::size_t kBlock = 1 << 20;
    std::string a, b;
    for (std::size_t base = 0; base < total; base += kBlock) {
        const std::size_t len = std::min(kBlock, total - base);
        a.clear();
        b.clear();
        extract(even, Nat(base), len, a);
        extract(odd, Nat(base), len, b);
        for (std::size_t i = 0; i < len; ++i)
            if (a[i] != b[i]) diffs.emplace_back(base + i);
    }

    if (diffs.size() != 1 || diffs[0] != lengths_[even - 2])
        throw std::logic_error("diff_positions: w_" + std::to_string(even) + " vs w_" +
                               std::to_string(odd) + " did not differ exactly at |w_" +
                               std::to_string(even - 2) + "|");
    return diffs;
}

Letter WordFamily::periodic_letter(int base, const Nat& pos) const {
    const Nat& len = length(base);
    Nat m = pos % len;
    if (m < 0) m += len;
    return letter_at(base, m);
}

}  // namespace cam
