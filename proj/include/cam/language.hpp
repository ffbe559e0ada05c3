#pragma once

#include "cam/word_family.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace cam {

// Smallest p >= 1 with v[i] == v[i+p] for all 0 <= i < |v|-p.
// Border-array based, linear time. Throws on the empty word.
int64_t min_period(std::string_view v);

// True iff p is a period of v (p >= |v| is vacuously a period).
bool has_period(std::string_view v, int64_t p);

// Shortest r with u = r^(|u|/|r|); u itself when u is primitive.
std::string_view primitive_root(std::string_view u);

// Starting offsets of every occurrence of `pattern` in `text` (KMP).
std::vector<int64_t> occurrences(std::string_view pattern, std::string_view text);

// A periodic point u^Z identified by the family word u = w_base and a phase:
// point[i] = w_base[(phase + i) mod |w_base|].
struct PeriodicPointSpec {
    int base = 0;
    Nat phase = 0;
};

// True iff u occurs in w_base^Z. Searches u inside w_base repeated
// ceil(|u| / |w_base|) + 1 times; |u| is capped by the family's
// materialization cap.
bool occurs_in_periodic(const WordFamily& family, std::string_view u,
                        const PeriodicPointSpec& spec);

struct WitnessResult {
    bool found = false;
    int64_t start = -1;      // offset of v in w_{2n}
    std::string word;        // v itself, length 2|w_{2k}|
    int64_t period = 0;      // min_period(v), > |w_{2k}| when found
    int64_t period_bound = 0;  // |w_{2k}|
};

// First (leftmost) subword v of w_{2n} with |v| = 2|w_{2k}| and
// min_period(v) > |w_{2k}|, i.e. a word that is not a subword of any u^Z
// with |u| <= |w_{2k}|. Not-found is reported, not thrown.
WitnessResult find_nonpower_witness(const WordFamily& family, int k, int n);

struct CoverageReport {
    int k = 0, n = 0;
    Nat window_length;   // 2 |w_{2k+2}| |w_{2k}| + 2J, J = 2 |w_{2k+2}|
    int64_t windows_scanned = 0;
    int64_t windows_with_witness_center = 0;
    int64_t failures = 0;
};

// Slides a window of the report's window_length across w_{2n}. Whenever the
// central subword of length 2|w_{2k}| has min_period > |w_{2k}|, the window
// must contain w_{2k}; windows violating that are counted as failures.
// The central subword of an even-length window of length L occupies
// [L/2 - l/2, L/2 + l/2).
CoverageReport verify_coverage_lemma(const WordFamily& family, int k, int n,
                                     int threads = 1);

}  // namespace cam
