#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace emdr {

// Runs fn(i) for i in [0, n). Each index owns its output slot, so results are
// identical for any thread count; n_threads <= 1 runs inline.
inline void parallel_for(std::size_t n, unsigned n_threads,
                         const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    if (n_threads <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n));
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
        pool.emplace_back([&, t]() {
            for (std::size_t i = t; i < n; i += n_threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

inline unsigned resolve_threads(int requested) {
    if (requested > 0) return static_cast<unsigned>(requested);
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

} // namespace emdr
