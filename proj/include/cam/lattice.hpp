#pragma once

#include "cam/nat.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cam {

// Everything here instantiates the pattern construction on G = Z^d with the
// subgroup chain G_i = (M_i Z)^d, M_i = m_1 ... m_i for odd scales m_i >= 5.
// Cells are lattice points; the word metric is L1 (generators +-e_j).

using Cell = std::vector<int64_t>;

int64_t l1_norm(const Cell& c);
int64_t l1_dist(const Cell& a, const Cell& b);

struct BallSpec {
    int level = 0;  // placed inside T_level (cells are M_{level-1}-blocks)
    int j = 0;      // filled with the G_j-periodic extension of P_{j,a}
    int a = 0;
    Cell center;    // in cell coordinates of the level grid
    int64_t side = 1;  // odd; the ball covers cells with |c - center|_inf <= (side-1)/2
};

struct SeparationSpec {
    int64_t ball_ball = 0;      // min pairwise L1 cell distance between balls
    int64_t ball_boundary = 0;  // min full cell rings between a ball and the box edge
    int64_t ball_identity = 0;  // min L1 cell distance from a ball to the identity cell
};

struct ChainSpec {
    int d = 2;
    std::vector<int64_t> scales;  // odd, >= 5
    SeparationSpec separations;
    std::vector<BallSpec> balls;

    bool operator==(const ChainSpec&) const = default;
};

// The shipped layout: d=2, scales (5,7,9), one cell per ball.
ChainSpec default_chain_spec();

// Plain-text key=value format (see configs/): d, scales, separation.*, and
// ball.<level>.<j>.<a> = c_1,...,c_d,side lines. Throws ConfigError.
ChainSpec parse_chain_config(std::istream& in);
ChainSpec load_chain_config(const std::string& path);
void write_chain_config(std::ostream& out, const ChainSpec& spec);

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string what, std::vector<std::string> violations = {})
        : std::runtime_error(std::move(what)), violations(std::move(violations)) {}
    std::vector<std::string> violations;
};

struct LevelValidation {
    int level = 0;
    int64_t achieved_ball_ball = -1;      // -1 when fewer than two balls
    int64_t achieved_ball_boundary = -1;  // -1 when no balls
    int64_t achieved_ball_identity = -1;
};

// The chain with its transversals T_i = centered boxes of side M_i.
class GroupChain {
public:
    explicit GroupChain(ChainSpec spec);

    const ChainSpec& spec() const { return spec_; }
    int d() const { return spec_.d; }
    int depth() const { return static_cast<int>(spec_.scales.size()); }
    int64_t modulus(int level) const { return moduli_[static_cast<std::size_t>(level)]; }  // M_level
    Nat transversal_size(int level) const;  // |T_level| = M_level^d

    // R_level = M_{level-1} * (centered box of side m_level), lexicographic order.
    std::vector<Cell> step_reps(int level) const;
    // All cells of T_level, lexicographic order (enumeration; small levels only).
    std::vector<Cell> transversal_cells(int level) const;

    const std::vector<BallSpec>& balls_at(int level) const;
    const std::vector<LevelValidation>& validation() const { return validation_; }

private:
    void validate_layout();
    void verify_greedy_reps() const;

    ChainSpec spec_;
    std::vector<int64_t> moduli_;
    std::vector<std::vector<BallSpec>> balls_by_level_;
    std::vector<LevelValidation> validation_;
};

// A pattern on the transversal T_level: letters on the centered box of side
// modulus(level), stored row-major over coordinates in [-(M-1)/2, (M-1)/2]^d.
struct PatternZd {
    int level = 0;
    int parity = 0;
    int d = 2;
    int64_t side = 1;
    std::vector<uint8_t> letters;

    std::size_t flat(const Cell& c) const;
    uint8_t at(const Cell& c) const { return letters[flat(c)]; }
    // Letter of the G_level-periodic point x_P at an arbitrary lattice point.
    uint8_t periodic_at(const Cell& c) const;
};

// P_{0,a} = the letter a; P_{i+1,a} places P_{i,a} on the central cell,
// fills each configured ball with the G_j-periodic extension of P_{j,a'},
// and fills every remaining cell with P_{i,0}.
class PatternFamily {
public:
    PatternFamily(const GroupChain& chain, int depth);

    const GroupChain& chain() const { return *chain_; }
    int depth() const { return depth_; }
    const PatternZd& pattern(int level, int parity) const;

private:
    const GroupChain* chain_;
    int depth_;
    std::vector<std::array<PatternZd, 2>> levels_;
};

// Letters of x_P on the centered box of side `box_side` (any odd size).
PatternZd periodic_point_window(const PatternZd& pattern, int64_t box_side);

// Checks the window content is invariant under translation by M_level e_j
// on the overlap, for every axis.
bool verify_periodicity(const PatternZd& pattern, int64_t box_side);

struct ForbiddenSet {
    int64_t r = 0;
    int d = 2;
    std::vector<Cell> ball;               // L1 ball offsets, lexicographic
    std::vector<uint32_t> forbidden;      // masks (bit i = letter at ball[i]), sorted
    std::size_t total = 0;                // 2^{|ball|}
    bool contains(uint32_t mask) const;
};

// All r-ball patterns that occur in none of the given periodic points.
// Enumeration refuses balls larger than 24 cells.
ForbiddenSet forbidden_patterns(const std::vector<const PatternZd*>& points, int64_t r);

struct GapBulletReport {
    int64_t checked = 0;
    int64_t max_distance = -1;     // -1 when nothing checked
    bool unreachable = false;      // some checked cell has no occurrence at all
    bool pass = true;
    std::optional<Cell> witness;   // a violating cell, when failing
};

struct GapReport {
    int k = 0, n = 0;
    int64_t r = 0;
    int64_t R = 0;                 // L1 diameter of the domain of P_{k+1,0}
    int64_t occurrence_count[2] = {0, 0};
    GapBulletReport boundary[2];   // bullet 1, per parity of P_{n,a}
    GapBulletReport forbidden[2];  // bullet 2, per parity
    bool pass = true;
};

// Exhaustively scans P_{n,a} (both parities) for the two gap bullets:
//   1. every cell within 2r of the complement of T_n has an occurrence of
//      P_{k,0} within distance R;
//   2. every cell where a forbidden pattern (radius r, relative to the
//      points of levels < k) appears has one within distance R + r.
// Occurrence distance is measured to the center cell of the occurrence.
GapReport verify_gap_property(const PatternFamily& family, int k, int n, int64_t r);

struct GroupLimitPair {
    PatternZd x_window, y_window;  // windows of x_{P_{n,0}}, x_{P_{n,1}}
    Cell diff_cell;                // always the identity
};

// Centered windows of the two level-n periodic points; checked to differ
// exactly at the identity cell.
GroupLimitPair group_limit_pair(const PatternFamily& family, int level, int64_t box_side);

// Binary PGM (P5), one gray level per letter: 0 -> white, 1 -> black.
// d = 2 only.
void write_pgm(const PatternZd& pattern, std::ostream& os);
void write_pgm_file(const PatternZd& pattern, const std::string& path);

}  // namespace cam
