#include "cam/quotient.hpp"

#include "cam/parallel.hpp"

#include <algorithm>
#include <cassert>

namespace cam {

void Dyadic::normalize() {
    if (num == 0) {
        log2_den = 0;
        return;
    }
    while ((num & 1) == 0) {
        num >>= 1;
        --log2_den;
    }
}

Dyadic Dyadic::pow2(int64_t e) {
    Dyadic d;
    d.num = 1;
    d.log2_den = e;
    return d;
}

std::string Dyadic::str() const {
    if (num == 0) return "0";
    if (log2_den <= 0) return to_string(num << static_cast<unsigned>(-log2_den));
    return to_string(num) + "/2^" + std::to_string(log2_den);
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    Dyadic r;
    r.log2_den = std::max(a.log2_den, b.log2_den);
    r.num = (a.num << static_cast<unsigned>(r.log2_den - a.log2_den)) +
            (b.num << static_cast<unsigned>(r.log2_den - b.log2_den));
    r.normalize();
    return r;
}

bool operator<(const Dyadic& a, const Dyadic& b) {
    const int64_t den = std::max(a.log2_den, b.log2_den);
    return (a.num << static_cast<unsigned>(den - a.log2_den)) <
           (b.num << static_cast<unsigned>(den - b.log2_den));
}

bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.num == b.num && (a.num == 0 || a.log2_den == b.log2_den);
}

namespace {

// Sum of at most four powers 2^{-e}, kept canonical (strictly ascending
// exponents). Exact, allocation-free; the chain-minimization hot loop works
// on these and only the winner is converted to a Dyadic.
struct PowSum {
    std::array<int64_t, 4> e{};
    int cnt = 0;

    static PowSum zero() { return {}; }
    static PowSum pow2(int64_t exp) {
        PowSum p;
        p.e[0] = exp;
        p.cnt = 1;
        return p;
    }

    void canonicalize() {
        std::sort(e.begin(), e.begin() + cnt, std::greater<>());  // ascending value
        bool merged = true;
        while (merged) {
            merged = false;
            for (int i = 0; i + 1 < cnt; ++i) {
                if (e[static_cast<std::size_t>(i)] == e[static_cast<std::size_t>(i) + 1]) {
                    e[static_cast<std::size_t>(i)] -= 1;  // 2^-t + 2^-t = 2^-(t-1)
                    for (int j = i + 1; j + 1 < cnt; ++j)
                        e[static_cast<std::size_t>(j)] = e[static_cast<std::size_t>(j) + 1];
                    --cnt;
                    std::sort(e.begin(), e.begin() + cnt, std::greater<>());
                    merged = true;
                    break;
                }
            }
        }
        std::sort(e.begin(), e.begin() + cnt);  // store ascending exponent
    }

    friend PowSum operator+(PowSum a, const PowSum& b) {
        for (int i = 0; i < b.cnt; ++i) {
            assert(a.cnt < 4);
            a.e[static_cast<std::size_t>(a.cnt++)] = b.e[static_cast<std::size_t>(i)];
        }
        a.canonicalize();
        return a;
    }

    // Value comparison; ascending-exponent canonical form makes it lexicographic.
    friend bool operator<(const PowSum& a, const PowSum& b) {
        for (int i = 0; i < a.cnt && i < b.cnt; ++i) {
            const auto ai = a.e[static_cast<std::size_t>(i)], bi = b.e[static_cast<std::size_t>(i)];
            if (ai != bi) return ai > bi;  // bigger exponent = smaller term
        }
        return a.cnt < b.cnt;
    }

    Dyadic to_dyadic() const {
        Dyadic d = Dyadic::zero();
        for (int i = 0; i < cnt; ++i) d = d + Dyadic::pow2(e[static_cast<std::size_t>(i)]);
        return d;
    }
};

int64_t first_diff(const Window& p, const Window& q) {
    const int64_t R = p.radius();
    for (int64_t m = 0; m <= R; ++m) {
        if (p.at(m) != q.at(m) || p.at(-m) != q.at(-m)) return m;
    }
    return -1;
}

}  // namespace

Window::Window(int64_t radius, std::string letters) : radius_(radius), letters_(std::move(letters)) {
    if (radius_ < 0 || letters_.size() != static_cast<std::size_t>(2 * radius_ + 1))
        throw std::invalid_argument("Window: letters must cover [-radius, radius]");
}

std::string periodic_range(const WordFamily& family, int base, Nat start, std::size_t len) {
    const Nat& L = family.length(base);
    Nat off = start % L;
    if (off < 0) off += L;
    std::string out;
    out.reserve(len);
    while (len > 0) {
        const Nat room = L - off;
        const std::size_t take = fits_size(room, len) ? to_size(room) : len;
        family.extract(base, off, take, out);
        len -= take;
        off = 0;
    }
    return out;
}

Window periodic_window(const WordFamily& family, const PeriodicPointSpec& spec, int64_t radius) {
    return Window(radius, periodic_range(family, spec.base, spec.phase - radius,
                                         static_cast<std::size_t>(2 * radius + 1)));
}

Window point_window(const WordFamily& family, int level, int parity, int64_t radius) {
    if (level < 1) throw std::invalid_argument("point_window: level must be >= 1");
    return periodic_window(family, {2 * level + parity, family.length(2 * level - 2)}, radius);
}

namespace {

// Least level n with |w_{2n-2}| >= r; level n then matches the limit point
// on [-|w_{2n-2}|, |w_{2n-2}|].
int level_for_agreement(const WordFamily& family, const Nat& r) {
    for (int n = 1; n <= family.max_level(); ++n)
        if (family.length(2 * n - 2) >= r) return n;
    throw std::out_of_range("family max_level too small for requested radius");
}

}  // namespace

char limit_letter(const WordFamily& family, int parity, const Nat& i) {
    const Nat mag = i < 0 ? Nat(-i) : i;
    const int n = level_for_agreement(family, mag);
    return family.periodic_letter(2 * n + parity, family.length(2 * n - 2) + i);
}

DistanceBound cantor_distance(const Window& p, const Window& q) {
    if (p.radius() != q.radius())
        throw std::invalid_argument("cantor_distance: radius mismatch");
    const int64_t m = first_diff(p, q);
    DistanceBound b;
    if (m >= 0) {
        b.lower = b.upper = Dyadic::pow2(m);
    } else {
        b.lower = Dyadic::zero();
        b.upper = Dyadic::pow2(p.radius());
    }
    return b;
}

LimitPair build_limit_pair(const WordFamily& family, int64_t radius) {
    LimitPair pair;
    pair.radius = radius;
    const int n0 = level_for_agreement(family, Nat(radius));
    if (n0 + 1 > family.max_level())
        throw std::out_of_range("build_limit_pair: max_level too small to certify stabilization");
    pair.level_used = n0;
    pair.x_window = point_window(family, n0, 0, radius);
    pair.y_window = point_window(family, n0, 1, radius);
    pair.stabilized = pair.x_window == point_window(family, n0 + 1, 0, radius) &&
                      pair.y_window == point_window(family, n0 + 1, 1, radius);
    for (int64_t i = -radius; i <= radius; ++i) {
        const bool differ = pair.x_window.at(i) != pair.y_window.at(i);
        if (differ != (i == 0))
            throw std::logic_error("limit pair windows do not differ exactly at the origin");
    }
    return pair;
}

QuotientRelation::QuotientRelation(const WordFamily& family, QuotientRelationSpec spec)
    : spec_(spec) {
    if (spec_.shift_bound > spec_.radius)
        throw std::invalid_argument("QuotientRelation: shift_bound must be <= radius");
    if (spec_.hop_bound < 1 || spec_.hop_bound > 2)
        throw std::invalid_argument("QuotientRelation: hop_bound must be 1 or 2");
    pair_ = build_limit_pair(family, spec_.radius);
    const int64_t ext = spec_.radius + spec_.shift_bound;
    const int n = level_for_agreement(family, Nat(ext));
    const std::size_t len = static_cast<std::size_t>(2 * ext + 1);
    x_ext_ = periodic_range(family, 2 * n, family.length(2 * n - 2) - ext, len);
    y_ext_ = periodic_range(family, 2 * n + 1, family.length(2 * n - 2) - ext, len);
}

char QuotientRelation::side_letter(int side, int64_t pos) const {
    const int64_t ext = spec_.radius + spec_.shift_bound;
    return (side == 0 ? x_ext_ : y_ext_)[static_cast<std::size_t>(pos + ext)];
}

Window QuotientRelation::shifted_x(int64_t k) const {
    const int64_t ext = spec_.radius + spec_.shift_bound;
    return Window(spec_.radius,
                  x_ext_.substr(static_cast<std::size_t>(k - spec_.radius + ext),
                                static_cast<std::size_t>(2 * spec_.radius + 1)));
}

Window QuotientRelation::shifted_y(int64_t k) const {
    const int64_t ext = spec_.radius + spec_.shift_bound;
    return Window(spec_.radius,
                  y_ext_.substr(static_cast<std::size_t>(k - spec_.radius + ext),
                                static_cast<std::size_t>(2 * spec_.radius + 1)));
}

int64_t QuotientRelation::hop_first_diff(int a_side, int64_t k, int b_side, int64_t kp) const {
    for (int64_t m = 0; m <= spec_.radius; ++m) {
        if (side_letter(a_side, m + k) != side_letter(b_side, m + kp) ||
            side_letter(a_side, -m + k) != side_letter(b_side, -m + kp))
            return m;
    }
    return -1;
}

DistanceBound quotient_distance(const Window& p, const Window& q, const QuotientRelation& rel) {
    const int64_t R = rel.spec().radius;
    if (p.radius() != R || q.radius() != R)
        throw std::invalid_argument("quotient_distance: windows must be at the relation radius");
    const int64_t K = rel.spec().shift_bound;

    const int64_t direct = first_diff(p, q);
    const auto seg = [R](int64_t fd) { return PowSum::pow2(fd < 0 ? R : fd); };

    PowSum best = seg(direct);
    bool collapsed = direct < 0;

    // Window-vs-hop-point first differences, one array per side.
    const int64_t span = 2 * K + 1;
    std::vector<int64_t> p_to(2 * static_cast<std::size_t>(span)), to_q(2 * static_cast<std::size_t>(span));
    const auto edge = [&](const Window& w, int side, int64_t k) {
        for (int64_t m = 0; m <= R; ++m) {
            if (w.at(m) != rel.side_letter(side, m + k) ||
                w.at(-m) != rel.side_letter(side, -m + k))
                return m;
        }
        return int64_t{-1};
    };
    for (int side = 0; side < 2; ++side)
        for (int64_t k = -K; k <= K; ++k) {
            p_to[static_cast<std::size_t>(side * span + k + K)] = edge(p, side, k);
            to_q[static_cast<std::size_t>(side * span + k + K)] = edge(q, side, k);
        }
    const auto edge_at = [&](const std::vector<int64_t>& v, int side, int64_t k) {
        return v[static_cast<std::size_t>(side * span + k + K)];
    };

    // One hop: p .. sigma^k A ~ sigma^k B .. q.
    for (int64_t k = -K; k <= K; ++k) {
        for (int a = 0; a < 2; ++a) {
            const int b = 1 - a;
            const int64_t e1 = edge_at(p_to, a, k), e2 = edge_at(to_q, b, k);
            const PowSum chain = seg(e1) + seg(e2);
            if (chain < best) best = chain;
            if (e1 < 0 && e2 < 0) collapsed = true;
        }
    }

    if (rel.spec().hop_bound >= 2) {
        // Two hops: p .. sigma^k A ~ sigma^k A' .. sigma^k2 B ~ sigma^k2 B' .. q.
        for (int64_t k = -K; k <= K; ++k)
            for (int a = 0; a < 2; ++a) {
                const int64_t e1 = edge_at(p_to, a, k);
                const PowSum s1 = seg(e1);
                if (!(s1 < best)) continue;  // middle and tail only add
                for (int64_t k2 = -K; k2 <= K; ++k2)
                    for (int b = 0; b < 2; ++b) {
                        const int64_t e3 = edge_at(to_q, 1 - b, k2);
                        const int64_t emid = rel.hop_first_diff(1 - a, k, b, k2);
                        PowSum chain = s1 + seg(emid) + seg(e3);
                        if (chain < best) best = chain;
                        if (e1 < 0 && emid < 0 && e3 < 0) collapsed = true;
                    }
            }
    }

    DistanceBound out;
    out.upper = best.to_dyadic();
    if (collapsed) {
        out.lower = Dyadic::zero();
    } else {
        out.lower = direct < 0 ? Dyadic::zero() : Dyadic::pow2(direct);
        if (out.upper < out.lower) out.lower = out.upper;
    }
    return out;
}

namespace {

int64_t centered_mod(int64_t v, int64_t L) {
    int64_t m = v % L;
    if (m < 0) m += L;
    if (2 * m > L) m -= L;
    return m;  // in (-L/2, L/2]
}

}  // namespace

NonexpansivityCertificate nonexpansivity_certificate(const WordFamily& family, int r, int n_max,
                                                     int64_t radius, int threads) {
    NonexpansivityCertificate cert;
    cert.r = r;
    cert.radius = radius;
    const Dyadic target = Dyadic::pow2(r);

    const QuotientRelation rel(family, {radius, radius, 2});

    bool have_best = false;
    for (int n = 1; n <= n_max; ++n) {
        if (!family.materializable(2 * n))
            throw CapExceeded("nonexpansivity_certificate: period scan beyond cap",
                              family.length(2 * n));
        // Verifies the single-difference law for this level; every shift j
        // whose difference position lies outside the window then provably
        // compares as [0, 2^{-radius}], so only shifts with the difference
        // in view need the full chain evaluation.
        (void)family.diff_positions(n);

        const int64_t L = static_cast<int64_t>(family.length(2 * n));
        const int64_t D = static_cast<int64_t>(family.length(2 * n - 2));
        const std::string even = family.materialize(2 * n);
        const std::string odd = family.materialize(2 * n + 1);
        const std::size_t W = static_cast<std::size_t>(2 * radius + 1);

        const auto window_at = [&](const std::string& w, int64_t j) {
            std::string letters;
            letters.reserve(W);
            int64_t pos = (j - radius) % L;
            if (pos < 0) pos += L;
            for (std::size_t t = 0; t < W; ++t) {
                letters.push_back(w[static_cast<std::size_t>(pos)]);
                if (++pos == L) pos = 0;
            }
            return Window(radius, std::move(letters));
        };

        // delta = centered difference position of (sigma^j w_{2n}^Z, sigma^j w_{2n+1}^Z).
        const int64_t lo = -std::min(radius, L / 2), hi = std::min(radius, (L - 1) / 2);
        std::vector<Dyadic> chunk_peaks(static_cast<std::size_t>(std::max(threads, 1)));
        Dyadic peak = L > 2 * radius + 1 ? Dyadic::pow2(radius) : Dyadic::zero();
        chunked_parallel(
            lo, hi + 1, threads,
            [&](int chunk, int64_t dlo, int64_t dhi) {
                Dyadic local = Dyadic::zero();
                for (int64_t delta = dlo; delta < dhi; ++delta) {
                    int64_t j = (D - delta) % L;
                    if (j < 0) j += L;
                    if (centered_mod(D - j, L) != delta) continue;  // clipped at small L
                    const DistanceBound b =
                        quotient_distance(window_at(even, j), window_at(odd, j), rel);
                    if (local < b.upper) local = b.upper;
                }
                chunk_peaks[static_cast<std::size_t>(chunk)] = local;
            },
            [&](int chunk) {
                if (peak < chunk_peaks[static_cast<std::size_t>(chunk)])
                    peak = chunk_peaks[static_cast<std::size_t>(chunk)];
            });

        const bool meets = peak <= target;
        cert.levels.push_back({n, peak, meets});
        if (!have_best || peak < cert.peak) {
            cert.peak = peak;
            have_best = true;
        }
        if (meets) {
            // Distinctness: (w_{2n}^Z, w_{2n+1}^Z) is not a relation hop,
            // because x is not |w_{2n}|-periodic.
            const Nat period = family.length(2 * n);
            for (int64_t m = 0; m <= 4 * radius; ++m) {
                for (const int64_t i : {m, -m}) {
                    const char a = limit_letter(family, 0, Nat(i));
                    const char b = limit_letter(family, 0, Nat(i) + period);
                    if (a != b) {
                        cert.ok = true;
                        cert.level = n;
                        cert.peak = peak;
                        cert.witness_pos = Nat(i);
                        cert.witness_here = a;
                        cert.witness_shifted = b;
                        return cert;
                    }
                    if (m == 0) break;
                }
            }
            throw std::logic_error(
                "nonexpansivity_certificate: no aperiodicity witness within search range");
        }
    }
    return cert;  // ok = false; peak holds the best bound found
}

LeastPeriodCertificate least_period_certificate(const WordFamily& family, int n_max) {
    LeastPeriodCertificate cert;
    for (int n = 1; n <= n_max + 1; ++n) {
        const std::string w = family.materialize(2 * n);
        if (primitive_root(w) != w)
            throw std::logic_error("least_period_certificate: w_" + std::to_string(2 * n) +
                                   " is a proper power; construction falsified");
        cert.entries.push_back({n, family.length(2 * n)});
        // sigma^m moves w_{2n}^Z for every 0 < m < |w_{2n}|, so this level
        // witnesses faithfulness on [|w_{2n-2}|, |w_{2n}| - 1].
        cert.ranges.push_back({family.length(2 * n - 2), family.length(2 * n) - 1, n});
    }
    return cert;
}

}  // namespace cam
