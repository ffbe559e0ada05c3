#include "cam/language.hpp"

#include "cam/parallel.hpp"

#include <algorithm>
#include <stdexcept>

namespace cam {

namespace {

// KMP prefix function.
std::vector<int64_t> border_array(std::string_view v) {
    std::vector<int64_t> b(v.size(), 0);
    for (std::size_t i = 1; i < v.size(); ++i) {
        int64_t j = b[i - 1];
        while (j > 0 && v[i] != v[static_cast<std::size_t>(j)]) j = b[static_cast<std::size_t>(j - 1)];
        if (v[i] == v[static_cast<std::size_t>(j)]) ++j;
        b[i] = j;
    }
    return b;
}

}  // namespace

int64_t min_period(std::string_view v) {
    if (v.empty()) throw std::invalid_argument("min_period: empty word");
    const auto b = border_array(v);
    return static_cast<int64_t>(v.size()) - b.back();
}

bool has_period(std::string_view v, int64_t p) {
    if (p < 1) throw std::invalid_argument("has_period: period must be >= 1");
    for (std::size_t i = 0; i + static_cast<std::size_t>(p) < v.size(); ++i)
        if (v[i] != v[i + static_cast<std::size_t>(p)]) return false;
    return true;
}

std::string_view primitive_root(std::string_view u) {
    if (u.empty()) return u;
    const int64_t p = min_period(u);
    if (static_cast<int64_t>(u.size()) % p == 0) return u.substr(0, static_cast<std::size_t>(p));
    return u;
}

std::vector<int64_t> occurrences(std::string_view pattern, std::string_view text) {
    std::vector<int64_t> hits;
    if (pattern.empty() || pattern.size() > text.size()) return hits;
    const auto b = border_array(pattern);
    int64_t j = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        while (j > 0 && text[i] != pattern[static_cast<std::size_t>(j)]) j = b[static_cast<std::size_t>(j) - 1];
        if (text[i] == pattern[static_cast<std::size_t>(j)]) ++j;
        if (j == static_cast<int64_t>(pattern.size())) {
            hits.push_back(static_cast<int64_t>(i) - j + 1);
            j = b[static_cast<std::size_t>(j) - 1];
        }
    }
    return hits;
}

bool occurs_in_periodic(const WordFamily& family, std::string_view u,
                        const PeriodicPointSpec& spec) {
    if (u.empty()) return true;
    const Nat& period = family.length(spec.base);
    if (!fits_size(Nat(u.size()), family.materialize_cap()))
        throw CapExceeded("occurs_in_periodic: query longer than scan cap", Nat(u.size()));
    const std::string base = family.materialize(spec.base);
    // Enough repetitions that every occurrence in u^Z shows up.
    std::size_t reps = u.size() / base.size() + 2;
    std::string host;
    host.reserve(reps * base.size());
    for (std::size_t r = 0; r < reps; ++r) host += base;
    (void)period;
    return !occurrences(u, host).empty();
}

WitnessResult find_nonpower_witness(const WordFamily& family, int k, int n) {
    WitnessResult res;
    const Nat& bound_nat = family.length(2 * k);
    res.period_bound = static_cast<int64_t>(bound_nat);
    const std::string host = family.materialize(2 * n);
    const std::size_t want = 2 * static_cast<std::size_t>(res.period_bound);
    if (host.size() < want) return res;  // too short to contain any candidate
    for (std::size_t s = 0; s + want <= host.size(); ++s) {
        const std::string_view v(host.data() + s, want);
        const int64_t p = min_period(v);
        if (p > res.period_bound) {
            res.found = true;
            res.start = static_cast<int64_t>(s);
            res.word = std::string(v);
            res.period = p;
            return res;
        }
    }
    return res;
}

CoverageReport verify_coverage_lemma(const WordFamily& family, int k, int n, int threads) {
    CoverageReport rep;
    rep.k = k;
    rep.n = n;
    const Nat J = 2 * family.length(2 * k + 2);
    rep.window_length = 2 * family.length(2 * k + 2) * family.length(2 * k) + 2 * J;

    if (family.length(2 * n) < rep.window_length) return rep;  // no window fits

    const std::string host = family.materialize(2 * n);
    const std::string needle = family.materialize(2 * k);
    const std::size_t W = to_size(rep.window_length);
    const std::size_t center_len = 2 * needle.size();
    const std::size_t center_off = W / 2 - center_len / 2;
    const int64_t period_bound = static_cast<int64_t>(needle.size());

    // All occurrence starts of w_{2k} in the host, once; per-window
    // containment is then a binary search.
    const std::vector<int64_t> occ = occurrences(needle, host);

    const int64_t window_count = static_cast<int64_t>(host.size() - W) + 1;
    struct Part {
        int64_t scanned = 0, witness = 0, failures = 0;
    };
    std::vector<Part> parts(static_cast<std::size_t>(std::max(threads, 1)));
    chunked_parallel(
        0, window_count, threads,
        [&](int chunk, int64_t lo, int64_t hi) {
            Part& p = parts[static_cast<std::size_t>(chunk)];
            for (int64_t s = lo; s < hi; ++s) {
                ++p.scanned;
                const std::string_view center(host.data() + s + center_off, center_len);
                if (min_period(center) <= period_bound) continue;
                ++p.witness;
                // w_{2k} must start somewhere in [s, s + W - |w_{2k}|].
                auto it = std::lower_bound(occ.begin(), occ.end(), s);
                const int64_t last_start = s + static_cast<int64_t>(W - needle.size());
                if (it == occ.end() || *it > last_start) ++p.failures;
            }
        },
        [&](int chunk) {
            rep.windows_scanned += parts[static_cast<std::size_t>(chunk)].scanned;
            rep.windows_with_witness_center += parts[static_cast<std::size_t>(chunk)].witness;
            rep.failures += parts[static_cast<std::size_t>(chunk)].failures;
        });
    return rep;
}

}  // namespace cam
