#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace cam {

inline int default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Splits [begin, end) into per-thread chunks, runs `body(chunk_id, lo, hi)`
// on each, then merges chunk results in index order via `merge(chunk_id)`.
// Results are independent of the thread count because chunking is static and
// merging is ordered.
template <typename Body, typename Merge>
void chunked_parallel(int64_t begin, int64_t end, int threads, Body body, Merge merge) {
    const int64_t total = end - begin;
    if (total <= 0) return;
    int chunks = threads < 1 ? 1 : threads;
    if (static_cast<int64_t>(chunks) > total) chunks = static_cast<int>(total);
    const int64_t step = (total + chunks - 1) / chunks;

    if (chunks == 1) {
        body(0, begin, end);
        merge(0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    for (int c = 0; c < chunks; ++c) {
        const int64_t lo = begin + c * step;
        const int64_t hi = std::min(end, lo + step);
        if (lo >= hi) break;
        pool.emplace_back([&body, c, lo, hi] { body(c, lo, hi); });
    }
    for (auto& t : pool) t.join();
    for (int c = 0; c < chunks; ++c) merge(c);
}

}  // namespace cam
