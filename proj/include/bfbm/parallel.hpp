#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace bfbm {

// Worker count: BFBM_THREADS if set, otherwise the hardware count. Results
// must be written to per-item slots so the outcome is independent of the
// thread count.
inline unsigned thread_count() {
    if (const char* env = std::getenv("BFBM_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw >= 1 ? hw : 1;
}

template <typename Fn>
void parallel_for(std::size_t n_items, Fn&& fn) {
    unsigned workers = thread_count();
    if (workers <= 1 || n_items <= 1) {
        for (std::size_t i = 0; i < n_items; ++i) fn(i);
        return;
    }
    if (workers > n_items) workers = static_cast<unsigned>(n_items);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < n_items; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace bfbm
