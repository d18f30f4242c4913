#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace hsurf {

/// Worker cap: HSL_THREADS if set, else hardware concurrency (at least 1).
inline int worker_count() {
    if (const char* env = std::getenv("HSL_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Chunked parallel loop over [begin, end).  fn must only write to
/// index-owned slots; results are then independent of scheduling.
template <typename Fn>
void parallel_for(std::ptrdiff_t begin, std::ptrdiff_t end, Fn&& fn) {
    const std::ptrdiff_t n = end - begin;
    if (n <= 0) return;
    const int workers = std::min<std::ptrdiff_t>(worker_count(), n);
    if (workers <= 1 || n < 256) {
        for (std::ptrdiff_t i = begin; i < end; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::ptrdiff_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::ptrdiff_t lo = begin + w * chunk;
        const std::ptrdiff_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::ptrdiff_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace hsurf
