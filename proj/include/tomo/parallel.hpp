#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace tomo {

/// Worker count: explicit request wins, then TOMO_UNFOLD_THREADS, then
/// hardware concurrency.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("TOMO_UNFOLD_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(i) for i in [0, count) across up to `threads` workers. Results
/// must be written to per-index slots so the outcome is independent of the
/// schedule.
inline void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    threads = std::min(std::max(threads, 1), std::max(count, 1));
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    std::atomic<int> next{0};
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace tomo
