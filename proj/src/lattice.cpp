#include "cam/lattice.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace cam {

namespace {

int64_t half(int64_t side) { return (side - 1) / 2; }

// Centered residue of v modulo M, in [-(M-1)/2, (M-1)/2].
int64_t wrap_centered(int64_t v, int64_t M) {
    int64_t m = v % M;
    if (m < 0) m += M;
    if (m > half(M)) m -= M;
    return m;
}

// Odometer over the centered box of side `side` in dimension d,
// lexicographic. Calls f(cell).
template <typename F>
void for_each_cell(int d, int64_t side, F f) {
    Cell c(static_cast<std::size_t>(d), -half(side));
    const int64_t h = half(side);
    while (true) {
        f(c);
        int axis = d - 1;
        while (axis >= 0 && c[static_cast<std::size_t>(axis)] == h) {
            c[static_cast<std::size_t>(axis)] = -h;
            --axis;
        }
        if (axis < 0) return;
        ++c[static_cast<std::size_t>(axis)];
    }
}

std::vector<Cell> ball_cells(const BallSpec& b, int d) {
    std::vector<Cell> cells;
    for_each_cell(d, b.side, [&](const Cell& off) {
        Cell c = b.center;
        for (int j = 0; j < d; ++j) c[static_cast<std::size_t>(j)] += off[static_cast<std::size_t>(j)];
        cells.push_back(std::move(c));
    });
    return cells;
}

}  // namespace

int64_t l1_norm(const Cell& c) {
    int64_t s = 0;
    for (int64_t v : c) s += v < 0 ? -v : v;
    return s;
}

int64_t l1_dist(const Cell& a, const Cell& b) {
    int64_t s = 0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const int64_t d = a[j] - b[j];
        s += d < 0 ? -d : d;
    }
    return s;
}

ChainSpec default_chain_spec() {
    ChainSpec spec;
    spec.d = 2;
    spec.scales = {5, 7, 9};
    spec.separations = {3, 1, 2};
    spec.balls = {
        {1, 0, 0, {-1, 1}, 1},
        {1, 0, 1, {1, -1}, 1},
        {2, 0, 0, {-2, -2}, 1},
        {2, 0, 1, {2, 2}, 1},
        {2, 1, 0, {-2, 2}, 1},
        {2, 1, 1, {2, -2}, 1},
        {3, 0, 0, {-3, -3}, 1},
        {3, 0, 1, {3, 3}, 1},
        {3, 1, 0, {-3, 3}, 1},
        {3, 1, 1, {3, -3}, 1},
        {3, 2, 0, {-3, 0}, 1},
        {3, 2, 1, {3, 0}, 1},
    };
    return spec;
}

GroupChain::GroupChain(ChainSpec spec) : spec_(std::move(spec)) {
    std::vector<std::string> errors;
    if (spec_.d < 1 || spec_.d > 6) errors.push_back("d must be in [1, 6]");
    if (spec_.scales.empty()) errors.push_back("at least one scale required");
    for (int64_t m : spec_.scales)
        if (m < 5 || m % 2 == 0)
            errors.push_back("scale " + std::to_string(m) + " must be odd and >= 5");
    if (!errors.empty()) throw ConfigError("invalid chain spec", errors);

    moduli_.push_back(1);
    for (int64_t m : spec_.scales) {
        const int64_t M = moduli_.back() * m;
        double cells = 1.0;
        for (int j = 0; j < spec_.d; ++j) cells *= static_cast<double>(M);
        if (cells > 1e9) throw ConfigError("transversal too large to represent",
                                           {"|T| exceeds 1e9 cells at modulus " + std::to_string(M)});
        moduli_.push_back(M);
    }

    balls_by_level_.resize(spec_.scales.size() + 1);
    for (const BallSpec& b : spec_.balls) {
        if (b.level < 1 || b.level > depth())
            throw ConfigError("ball level out of range",
                              {"ball level " + std::to_string(b.level)});
        balls_by_level_[static_cast<std::size_t>(b.level)].push_back(b);
    }
    validate_layout();
    verify_greedy_reps();
}

void GroupChain::validate_layout() {
    std::vector<std::string> errors;
    for (int level = 1; level <= depth(); ++level) {
        const auto& balls = balls_by_level_[static_cast<std::size_t>(level)];
        LevelValidation v;
        v.level = level;
        const int64_t C = half(spec_.scales[static_cast<std::size_t>(level - 1)]);
        std::vector<std::vector<Cell>> cellsets;
        for (const BallSpec& b : balls) {
            if (static_cast<int>(b.center.size()) != spec_.d) {
                errors.push_back("ball at level " + std::to_string(level) +
                                 " has wrong dimension");
                continue;
            }
            if (b.side < 1 || b.side % 2 == 0)
                errors.push_back("ball side must be odd and >= 1 at level " +
                                 std::to_string(level));
            if (b.j < 0 || b.j >= level)
                errors.push_back("ball fill level j=" + std::to_string(b.j) +
                                 " must satisfy j < level at level " + std::to_string(level));
            if (b.a != 0 && b.a != 1) errors.push_back("ball parity must be 0 or 1");
            auto cells = ball_cells(b, spec_.d);
            for (const Cell& c : cells) {
                int64_t maxabs = 0;
                for (int64_t x : c) maxabs = std::max(maxabs, x < 0 ? -x : x);
                if (maxabs > C)
                    errors.push_back("ball (" + std::to_string(b.j) + "," + std::to_string(b.a) +
                                     ") at level " + std::to_string(level) + " leaves the box");
                const int64_t bgap = C - maxabs;
                if (v.achieved_ball_boundary < 0 || bgap < v.achieved_ball_boundary)
                    v.achieved_ball_boundary = bgap;
                const int64_t idist = l1_norm(c);
                if (idist == 0)
                    errors.push_back("ball covers the identity cell at level " +
                                     std::to_string(level));
                if (v.achieved_ball_identity < 0 || idist < v.achieved_ball_identity)
                    v.achieved_ball_identity = idist;
            }
            cellsets.push_back(std::move(cells));
        }
        for (std::size_t p = 0; p < cellsets.size(); ++p)
            for (std::size_t q = p + 1; q < cellsets.size(); ++q)
                for (const Cell& a : cellsets[p])
                    for (const Cell& b : cellsets[q]) {
                        const int64_t dist = l1_dist(a, b);
                        if (dist == 0)
                            errors.push_back("balls overlap at level " + std::to_string(level));
                        if (v.achieved_ball_ball < 0 || dist < v.achieved_ball_ball)
                            v.achieved_ball_ball = dist;
                    }
        if (!balls.empty()) {
            if (v.achieved_ball_boundary < spec_.separations.ball_boundary)
                errors.push_back("level " + std::to_string(level) + ": ball-boundary gap " +
                                 std::to_string(v.achieved_ball_boundary) + " < declared " +
                                 std::to_string(spec_.separations.ball_boundary));
            if (v.achieved_ball_identity < spec_.separations.ball_identity)
                errors.push_back("level " + std::to_string(level) + ": ball-identity distance " +
                                 std::to_string(v.achieved_ball_identity) + " < declared " +
                                 std::to_string(spec_.separations.ball_identity));
            if (cellsets.size() >= 2 && v.achieved_ball_ball < spec_.separations.ball_ball)
                errors.push_back("level " + std::to_string(level) + ": ball-ball distance " +
                                 std::to_string(v.achieved_ball_ball) + " < declared " +
                                 std::to_string(spec_.separations.ball_ball));
        }
        validation_.push_back(v);
    }
    if (!errors.empty()) throw ConfigError("chain layout infeasible", errors);
}

void GroupChain::verify_greedy_reps() const {
    // The greedy choice (nearest to the identity in L1, lexicographic
    // tie-break) of coset representatives of G_level inside G_{level-1}
    // must reproduce the centered box; odd scales make it unique.
    for (int level = 1; level <= depth(); ++level) {
        const int64_t m = spec_.scales[static_cast<std::size_t>(level - 1)];
        const int64_t Mprev = moduli_[static_cast<std::size_t>(level - 1)];
        bool ok = true;
        for_each_cell(spec_.d, m, [&](const Cell& rep) {
            // Candidates congruent to rep modulo m, offset by one box in
            // each direction; the greedy pick minimizes (L1, lex).
            Cell best;
            int64_t best_norm = std::numeric_limits<int64_t>::max();
            for_each_cell(spec_.d, 3, [&](const Cell& shift) {
                Cell cand(rep.size());
                for (std::size_t j = 0; j < rep.size(); ++j)
                    cand[j] = (rep[j] + shift[j] * m) * Mprev;
                const int64_t norm = l1_norm(cand);
                if (norm < best_norm || (norm == best_norm && cand < best)) {
                    best_norm = norm;
                    best = cand;
                }
            });
            for (std::size_t j = 0; j < rep.size(); ++j)
                if (best[j] != rep[j] * Mprev) ok = false;
        });
        if (!ok)
            throw ConfigError("greedy transversal check failed",
                              {"level " + std::to_string(level) +
                               ": greedy representatives are not the centered box"});
    }
}

Nat GroupChain::transversal_size(int level) const {
    Nat size = 1;
    for (int j = 0; j < spec_.d; ++j) size *= modulus(level);
    return size;
}

std::vector<Cell> GroupChain::step_reps(int level) const {
    if (level < 1 || level > depth()) throw std::out_of_range("step_reps: level out of range");
    const int64_t m = spec_.scales[static_cast<std::size_t>(level - 1)];
    const int64_t Mprev = moduli_[static_cast<std::size_t>(level - 1)];
    std::vector<Cell> reps;
    for_each_cell(spec_.d, m, [&](const Cell& c) {
        Cell r(c);
        for (auto& x : r) x *= Mprev;
        reps.push_back(std::move(r));
    });
    return reps;
}

std::vector<Cell> GroupChain::transversal_cells(int level) const {
    if (level < 0 || level > depth())
        throw std::out_of_range("transversal_cells: level out of range");
    std::vector<Cell> cells;
    for_each_cell(spec_.d, modulus(level), [&](const Cell& c) { cells.push_back(c); });
    return cells;
}

const std::vector<BallSpec>& GroupChain::balls_at(int level) const {
    return balls_by_level_.at(static_cast<std::size_t>(level));
}

std::size_t PatternZd::flat(const Cell& c) const {
    const int64_t h = half(side);
    std::size_t idx = 0;
    for (int j = 0; j < d; ++j)
        idx = idx * static_cast<std::size_t>(side) +
              static_cast<std::size_t>(c[static_cast<std::size_t>(j)] + h);
    return idx;
}

uint8_t PatternZd::periodic_at(const Cell& c) const {
    Cell w(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) w[j] = wrap_centered(c[j], side);
    return at(w);
}

PatternFamily::PatternFamily(const GroupChain& chain, int depth)
    : chain_(&chain), depth_(depth) {
    if (depth < 0 || depth > chain.depth())
        throw std::out_of_range("PatternFamily: depth out of range");

    PatternZd p0{0, 0, chain.d(), 1, {0}};
    PatternZd p1{0, 1, chain.d(), 1, {1}};
    levels_.push_back({p0, p1});

    for (int level = 1; level <= depth; ++level) {
        const int64_t m = chain.spec().scales[static_cast<std::size_t>(level - 1)];
        const int64_t Mprev = chain.modulus(level - 1);
        const int64_t M = chain.modulus(level);
        std::array<PatternZd, 2> built;
        for (int parity = 0; parity < 2; ++parity) {
            PatternZd& pat = built[static_cast<std::size_t>(parity)];
            pat.level = level;
            pat.parity = parity;
            pat.d = chain.d();
            pat.side = M;
            std::size_t total = 1;
            for (int j = 0; j < chain.d(); ++j) total *= static_cast<std::size_t>(M);
            pat.letters.assign(total, 0);

            for_each_cell(chain.d(), m, [&](const Cell& cell) {
                // Which pattern fills this M_{level-1}-cell.
                const PatternZd* fill = &levels_[static_cast<std::size_t>(level - 1)][0];
                bool central = l1_norm(cell) == 0;
                if (central) fill = &levels_[static_cast<std::size_t>(level - 1)]
                                             [static_cast<std::size_t>(parity)];
                else
                    for (const BallSpec& b : chain.balls_at(level)) {
                        bool inside = true;
                        for (int j = 0; j < chain.d(); ++j) {
                            const int64_t dj = cell[static_cast<std::size_t>(j)] -
                                               b.center[static_cast<std::size_t>(j)];
                            if (dj < -half(b.side) || dj > half(b.side)) inside = false;
                        }
                        if (inside) {
                            fill = &levels_[static_cast<std::size_t>(b.j)]
                                           [static_cast<std::size_t>(b.a)];
                            break;
                        }
                    }
                // Absolute coordinates are M_{level-1} * cell + t; every fill
                // pattern's modulus divides M_{level-1}, so periodic_at(t)
                // is already grid-aligned.
                Cell abs(static_cast<std::size_t>(chain.d()));
                for_each_cell(chain.d(), Mprev, [&](const Cell& t) {
                    for (int j = 0; j < chain.d(); ++j)
                        abs[static_cast<std::size_t>(j)] =
                            cell[static_cast<std::size_t>(j)] * Mprev +
                            t[static_cast<std::size_t>(j)];
                    pat.letters[pat.flat(abs)] = fill->periodic_at(t);
                });
            });
        }
        levels_.push_back(std::move(built));
    }
}

const PatternZd& PatternFamily::pattern(int level, int parity) const {
    if (level < 0 || level > depth_) throw std::out_of_range("pattern: level out of range");
    if (parity != 0 && parity != 1) throw std::out_of_range("pattern: parity must be 0/1");
    return levels_[static_cast<std::size_t>(level)][static_cast<std::size_t>(parity)];
}

PatternZd periodic_point_window(const PatternZd& pattern, int64_t box_side) {
    if (box_side < 1 || box_side % 2 == 0)
        throw std::invalid_argument("periodic_point_window: box side must be odd");
    PatternZd win;
    win.level = pattern.level;
    win.parity = pattern.parity;
    win.d = pattern.d;
    win.side = box_side;
    std::size_t total = 1;
    for (int j = 0; j < pattern.d; ++j) total *= static_cast<std::size_t>(box_side);
    win.letters.resize(total);
    for_each_cell(pattern.d, box_side,
                  [&](const Cell& c) { win.letters[win.flat(c)] = pattern.periodic_at(c); });
    return win;
}

bool verify_periodicity(const PatternZd& pattern, int64_t box_side) {
    const PatternZd win = periodic_point_window(pattern, box_side);
    const int64_t M = pattern.side;
    bool ok = true;
    for (int axis = 0; axis < pattern.d; ++axis) {
        for_each_cell(pattern.d, box_side, [&](const Cell& c) {
            Cell t(c);
            t[static_cast<std::size_t>(axis)] += M;
            if (t[static_cast<std::size_t>(axis)] > half(box_side)) return;
            if (win.at(c) != win.at(t)) ok = false;
        });
    }
    return ok;
}

namespace {

std::vector<Cell> l1_ball_offsets(int d, int64_t r) {
    std::vector<Cell> offs;
    for_each_cell(d, 2 * r + 1, [&](const Cell& c) {
        if (l1_norm(c) <= r) offs.push_back(c);
    });
    return offs;  // for_each_cell is lexicographic, so this is too
}

}  // namespace

bool ForbiddenSet::contains(uint32_t mask) const {
    return std::binary_search(forbidden.begin(), forbidden.end(), mask);
}

ForbiddenSet forbidden_patterns(const std::vector<const PatternZd*>& points, int64_t r) {
    if (points.empty() && r < 0) throw std::invalid_argument("forbidden_patterns: bad arguments");
    ForbiddenSet set;
    set.r = r;
    set.d = points.empty() ? 2 : points.front()->d;
    set.ball = l1_ball_offsets(set.d, r);
    if (set.ball.size() > 24)
        throw std::length_error("forbidden_patterns: ball too large to enumerate");
    set.total = std::size_t{1} << set.ball.size();

    std::vector<uint8_t> occurring(set.total, 0);
    Cell probe(static_cast<std::size_t>(set.d));
    for (const PatternZd* p : points) {
        if (p->d != set.d) throw std::invalid_argument("forbidden_patterns: dimension mismatch");
        // One period box of x_P covers every local configuration.
        for_each_cell(p->d, p->side, [&](const Cell& g) {
            uint32_t mask = 0;
            for (std::size_t i = 0; i < set.ball.size(); ++i) {
                for (std::size_t j = 0; j < probe.size(); ++j)
                    probe[j] = g[j] + set.ball[i][j];
                if (p->periodic_at(probe)) mask |= uint32_t{1} << i;
            }
            occurring[mask] = 1;
        });
    }
    for (std::size_t m = 0; m < set.total; ++m)
        if (!occurring[m]) set.forbidden.push_back(static_cast<uint32_t>(m));
    return set;
}

namespace {

// L1 distance from every cell of the pattern box to the nearest source cell
// (multi-source BFS; an axis-aligned box is L1-geodesically convex, so the
// in-box path distance equals the lattice L1 distance).
std::vector<int32_t> distance_field(const PatternZd& pat, const std::vector<std::size_t>& sources) {
    std::vector<int32_t> dist(pat.letters.size(), -1);
    std::deque<std::size_t> queue;
    for (std::size_t s : sources) {
        dist[s] = 0;
        queue.push_back(s);
    }
    // Flat-index neighbor steps per axis with row-major layout.
    std::vector<std::size_t> stride(static_cast<std::size_t>(pat.d));
    std::size_t acc = 1;
    for (int j = pat.d - 1; j >= 0; --j) {
        stride[static_cast<std::size_t>(j)] = acc;
        acc *= static_cast<std::size_t>(pat.side);
    }
    const std::size_t side = static_cast<std::size_t>(pat.side);
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        std::size_t rest = u;
        for (int j = 0; j < pat.d; ++j) {
            const std::size_t coord = rest / stride[static_cast<std::size_t>(j)];
            rest %= stride[static_cast<std::size_t>(j)];
            const std::size_t cj = coord % side;  // coordinate along axis j
            if (cj > 0 && dist[u - stride[static_cast<std::size_t>(j)]] < 0) {
                dist[u - stride[static_cast<std::size_t>(j)]] = dist[u] + 1;
                queue.push_back(u - stride[static_cast<std::size_t>(j)]);
            }
            if (cj + 1 < side && dist[u + stride[static_cast<std::size_t>(j)]] < 0) {
                dist[u + stride[static_cast<std::size_t>(j)]] = dist[u] + 1;
                queue.push_back(u + stride[static_cast<std::size_t>(j)]);
            }
        }
    }
    return dist;
}

// Centers h such that the content of pat on h + box(inner.side) equals inner.
std::vector<std::size_t> occurrence_centers(const PatternZd& pat, const PatternZd& inner) {
    std::vector<std::size_t> centers;
    const int64_t hi = half(inner.side);
    const int64_t limit = half(pat.side) - hi;
    if (limit < 0) return centers;
    // Prefilter on the number of ones via a d-dimensional prefix-sum would
    // be possible; direct comparison is fast enough at the shipped sizes.
    Cell probe(static_cast<std::size_t>(pat.d));
    for_each_cell(pat.d, 2 * limit + 1, [&](const Cell& h) {
        bool match = true;
        for_each_cell(pat.d, inner.side, [&](const Cell& t) {
            if (!match) return;
            for (std::size_t j = 0; j < probe.size(); ++j) probe[j] = h[j] + t[j];
            if (pat.at(probe) != inner.at(t)) match = false;
        });
        if (match) centers.push_back(pat.flat(h));
    });
    return centers;
}

}  // namespace

GapReport verify_gap_property(const PatternFamily& family, int k, int n, int64_t r) {
    GapReport rep;
    rep.k = k;
    rep.n = n;
    rep.r = r;
    if (k + 1 > family.depth() || n > family.depth() || k < 0 || n < k)
        throw std::out_of_range("verify_gap_property: need 0 <= k <= n and k+1 <= depth");
    const GroupChain& chain = family.chain();
    rep.R = chain.d() * (chain.modulus(k + 1) - 1);

    std::vector<const PatternZd*> lower_points;
    for (int j = 0; j < k; ++j)
        for (int a = 0; a < 2; ++a) lower_points.push_back(&family.pattern(j, a));
    const ForbiddenSet q = forbidden_patterns(lower_points, r);

    const PatternZd& needle = family.pattern(k, 0);
    for (int parity = 0; parity < 2; ++parity) {
        const PatternZd& pat = family.pattern(n, parity);
        const auto centers = occurrence_centers(pat, needle);
        rep.occurrence_count[parity] = static_cast<int64_t>(centers.size());
        const auto dist = distance_field(pat, centers);

        GapBulletReport& b1 = rep.boundary[parity];
        GapBulletReport& b2 = rep.forbidden[parity];
        const int64_t C = half(pat.side);
        Cell probe(static_cast<std::size_t>(pat.d));
        for_each_cell(pat.d, pat.side, [&](const Cell& g) {
            int64_t maxabs = 0;
            for (int64_t x : g) maxabs = std::max(maxabs, x < 0 ? -x : x);
            const std::size_t fg = pat.flat(g);
            if (C + 1 - maxabs <= 2 * r) {
                ++b1.checked;
                if (dist[fg] < 0) {
                    b1.unreachable = true;
                    b1.pass = false;
                    if (!b1.witness) b1.witness = g;
                } else {
                    b1.max_distance = std::max(b1.max_distance, int64_t{dist[fg]});
                    if (dist[fg] > rep.R) {
                        b1.pass = false;
                        if (!b1.witness) b1.witness = g;
                    }
                }
            }
            if (maxabs + r <= C) {  // r-ball fully inside the box
                uint32_t mask = 0;
                for (std::size_t i = 0; i < q.ball.size(); ++i) {
                    for (std::size_t j = 0; j < probe.size(); ++j)
                        probe[j] = g[j] + q.ball[i][j];
                    if (pat.at(probe)) mask |= uint32_t{1} << i;
                }
                if (q.contains(mask)) {
                    ++b2.checked;
                    if (dist[fg] < 0) {
                        b2.unreachable = true;
                        b2.pass = false;
                        if (!b2.witness) b2.witness = g;
                    } else {
                        b2.max_distance = std::max(b2.max_distance, int64_t{dist[fg]});
                        if (dist[fg] > rep.R + r) {
                            b2.pass = false;
                            if (!b2.witness) b2.witness = g;
                        }
                    }
                }
            }
        });
        rep.pass = rep.pass && b1.pass && b2.pass;
    }
    return rep;
}

GroupLimitPair group_limit_pair(const PatternFamily& family, int level, int64_t box_side) {
    if (box_side > family.chain().modulus(level))
        throw std::invalid_argument("group_limit_pair: box must lie within the transversal");
    GroupLimitPair pair;
    pair.x_window = periodic_point_window(family.pattern(level, 0), box_side);
    pair.y_window = periodic_point_window(family.pattern(level, 1), box_side);
    pair.diff_cell = Cell(static_cast<std::size_t>(family.chain().d()), 0);
    bool ok = true;
    for_each_cell(pair.x_window.d, box_side, [&](const Cell& c) {
        const bool differ = pair.x_window.at(c) != pair.y_window.at(c);
        if (differ != (l1_norm(c) == 0)) ok = false;
    });
    if (!ok)
        throw std::logic_error("group_limit_pair: windows do not differ exactly at the identity");
    return pair;
}

void write_pgm(const PatternZd& pattern, std::ostream& os) {
    if (pattern.d != 2) throw std::invalid_argument("write_pgm: d = 2 only");
    os << "P5\n" << pattern.side << " " << pattern.side << "\n255\n";
    // Letters in flat (row-major) order; letter 0 renders white, 1 black.
    for (uint8_t v : pattern.letters) os.put(v ? '\0' : static_cast<char>(255));
}

void write_pgm_file(const PatternZd& pattern, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_pgm(pattern, out);
}

ChainSpec parse_chain_config(std::istream& in) {
    ChainSpec spec;
    spec.d = 0;
    std::vector<std::string> errors;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key=value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto parse_ints = [&](const std::string& v) {
            std::vector<int64_t> out;
            std::stringstream ss(v);
            std::string item;
            while (std::getline(ss, item, ',')) out.push_back(std::stoll(trim(item)));
            return out;
        };
        try {
            if (key == "d") {
                spec.d = static_cast<int>(std::stoll(value));
            } else if (key == "scales") {
                spec.scales = parse_ints(value);
            } else if (key == "separation.ball_ball") {
                spec.separations.ball_ball = std::stoll(value);
            } else if (key == "separation.ball_boundary") {
                spec.separations.ball_boundary = std::stoll(value);
            } else if (key == "separation.ball_identity") {
                spec.separations.ball_identity = std::stoll(value);
            } else if (key.rfind("ball.", 0) == 0) {
                std::stringstream ks(key.substr(5));
                std::string part;
                std::vector<int> idx;
                while (std::getline(ks, part, '.')) idx.push_back(std::stoi(part));
                if (idx.size() != 3) throw std::invalid_argument("ball key needs level.j.a");
                const auto nums = parse_ints(value);
                if (static_cast<int>(nums.size()) != spec.d + 1)
                    throw std::invalid_argument("ball value needs d coords and a side");
                BallSpec b;
                b.level = idx[0];
                b.j = idx[1];
                b.a = idx[2];
                b.center.assign(nums.begin(), nums.end() - 1);
                b.side = nums.back();
                spec.balls.push_back(std::move(b));
            } else {
                errors.push_back("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
            }
        } catch (const std::exception& e) {
            errors.push_back("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (spec.d == 0) errors.push_back("missing d");
    if (!errors.empty()) throw ConfigError("invalid chain config", errors);
    return spec;
}

ChainSpec load_chain_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open chain config " + path);
    return parse_chain_config(in);
}

void write_chain_config(std::ostream& out, const ChainSpec& spec) {
    out << "d=" << spec.d << "\n";
    out << "scales=";
    for (std::size_t i = 0; i < spec.scales.size(); ++i)
        out << (i ? "," : "") << spec.scales[i];
    out << "\n";
    out << "separation.ball_ball=" << spec.separations.ball_ball << "\n";
    out << "separation.ball_boundary=" << spec.separations.ball_boundary << "\n";
    out << "separation.ball_identity=" << spec.separations.ball_identity << "\n";
    for (const BallSpec& b : spec.balls) {
        out << "ball." << b.level << "." << b.j << "." << b.a << "=";
        for (int64_t c : b.center) out << c << ",";
        out << b.side << "\n";
    }
}

}  // namespace cam
