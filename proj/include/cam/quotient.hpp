#pragma once

#include "cam/language.hpp"
#include "cam/word_family.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace cam {

// Exact dyadic rational num / 2^log2_den, num >= 0, kept normalized
// (num odd unless zero). Distances are never represented in floating point.
struct Dyadic {
    Nat num = 0;
    int64_t log2_den = 0;

    void normalize();
    static Dyadic zero() { return {}; }
    static Dyadic pow2(int64_t e);  // 2^{-e}
    bool is_zero() const { return num == 0; }
    std::string str() const;
};

Dyadic operator+(const Dyadic& a, const Dyadic& b);
bool operator<(const Dyadic& a, const Dyadic& b);
bool operator==(const Dyadic& a, const Dyadic& b);
inline bool operator<=(const Dyadic& a, const Dyadic& b) { return a < b || a == b; }

// Finite-resolution stand-in for a point of the shift space: letters on
// [-radius, radius].
class Window {
public:
    Window() = default;
    Window(int64_t radius, std::string letters);

    int64_t radius() const { return radius_; }
    char at(int64_t i) const { return letters_[static_cast<std::size_t>(i + radius_)]; }
    const std::string& letters() const { return letters_; }

    bool operator==(const Window&) const = default;

private:
    int64_t radius_ = 0;
    std::string letters_ = "0";
};

// Window of w_base^Z on [phase + lo, phase + lo + len).
std::string periodic_range(const WordFamily& family, int base, Nat start, std::size_t len);
Window periodic_window(const WordFamily& family, const PeriodicPointSpec& spec, int64_t radius);

// Window of sigma^{|w_{2n-2}|}(w_{2n+a}^Z) on [-radius, radius]; the base
// letter w_a sits at the origin.
Window point_window(const WordFamily& family, int level, int parity, int64_t radius);

// Letter of the limit point x (parity 0) or y (parity 1) at position i,
// resolved through the least level whose agreement radius covers i.
char limit_letter(const WordFamily& family, int parity, const Nat& i);

// [lower, upper] with lower <= upper; exact when lower == upper.
struct DistanceBound {
    Dyadic lower, upper;
    bool exact() const { return lower == upper; }
};

// d(p,q) = 2^{-min{|i| : p_i != q_i}}: exact if a difference is visible in
// the windows, otherwise [0, 2^{-radius}]. Throws on radius mismatch.
DistanceBound cantor_distance(const Window& p, const Window& q);

struct LimitPair {
    int64_t radius = 0;
    Window x_window, y_window;
    int level_used = 0;   // least n with |w_{2n-2}| >= radius
    bool stabilized = false;  // levels n and n+1 produce identical windows
};

// The pair x = lim sigma^{|w_{2n-2}|}(w_{2n}^Z), y = likewise over odd
// indices, at finite radius. The windows are checked to differ exactly at
// the origin.
LimitPair build_limit_pair(const WordFamily& family, int64_t radius);

struct QuotientRelationSpec {
    int64_t radius = 64;
    int64_t shift_bound = 64;  // K: hops sigma^k x ~ sigma^k y for |k| <= K
    int hop_bound = 2;         // max relation hops per chain
};

// The shift-invariant closure of the identification {x, y}^2, truncated to
// shifts |k| <= K, with everything needed to evaluate hop chains at the
// relation's radius.
class QuotientRelation {
public:
    QuotientRelation(const WordFamily& family, QuotientRelationSpec spec);

    const QuotientRelationSpec& spec() const { return spec_; }
    const LimitPair& pair() const { return pair_; }
    Window shifted_x(int64_t k) const;
    Window shifted_y(int64_t k) const;

    // First differing |i| <= radius between sigma^k A and sigma^{k'} B for
    // A, B in {x, y} (0 = x, 1 = y); -1 when the windows agree.
    int64_t hop_first_diff(int a_side, int64_t k, int b_side, int64_t kp) const;
    char side_letter(int side, int64_t pos) const;  // pos in [-(R+K), R+K]

private:
    QuotientRelationSpec spec_;
    LimitPair pair_;
    std::string x_ext_, y_ext_;  // letters on [-(R+K), R+K]
};

// Upper bound: min over the direct distance and chains of at most hop_bound
// relation hops of the summed window distances. Lower bound: 0 when some
// chain collapses below resolution, else the direct-distance lower bound
// (clamped so lower <= upper).
DistanceBound quotient_distance(const Window& p, const Window& q, const QuotientRelation& rel);

struct CertificateLevel {
    int level = 0;
    Dyadic peak;       // max over a full period of the quotient upper bound
    bool meets = false;  // peak <= 2^{-r}
};

struct NonexpansivityCertificate {
    int r = 0;
    int64_t radius = 0;
    bool ok = false;
    int level = -1;          // least level meeting the bound, -1 on failure
    Dyadic peak;             // its full-period max upper bound (best seen on failure)
    Nat witness_pos = 0;     // i with x_i != x_{i + |w_{2n}|}
    char witness_here = '0', witness_shifted = '0';
    std::vector<CertificateLevel> levels;
};

// Searches n <= n_max for a level whose pair (w_{2n}^Z, w_{2n+1}^Z) stays,
// over one full period of shifts, within quotient distance 2^{-r}, and
// certifies the pair is not itself a relation hop by exhibiting
// x_i != x_{i + |w_{2n}|}.
NonexpansivityCertificate nonexpansivity_certificate(const WordFamily& family, int r,
                                                     int n_max, int64_t radius = 64,
                                                     int threads = 1);

struct LeastPeriodEntry {
    int level = 0;
    Nat least_period;
};

struct FaithfulnessRange {
    Nat m_begin, m_end;  // inclusive
    int witness_level = 0;  // |w_{2n}| > m, so sigma^m moves w_{2n}^Z
};

struct LeastPeriodCertificate {
    std::vector<LeastPeriodEntry> entries;  // levels 1 .. n_max+1
    std::vector<FaithfulnessRange> ranges;  // cover every m in [1, |w_{2 n_max}|]
};

// Checks primitive_root(w_{2n}) = w_{2n} for n <= n_max+1 (least period of
// w_{2n}^Z is then exactly |w_{2n}|) and derives, for every m up to
// |w_{2 n_max}|, a witness level proving sigma^m is not the identity.
// Primitivity failure throws: it would falsify the construction.
LeastPeriodCertificate least_period_certificate(const WordFamily& family, int n_max);

}  // namespace cam
