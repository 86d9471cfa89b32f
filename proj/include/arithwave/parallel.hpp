#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>
#include <functional>

namespace arithwave {

// Worker-pool width: the ARITHWAVE_THREADS environment variable overrides the
// hardware default. Determinism never depends on this value: parallel loops
// write into preallocated per-index slots and reductions run in index order.
inline unsigned pool_size() {
    if (const char* env = std::getenv("ARITHWAVE_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 1024) return unsigned(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs fn(i) for i in [0, n). fn must only touch state owned by index i.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    unsigned workers = pool_size();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            fn(i);
        }
    };
    std::vector<std::thread> threads;
    unsigned count = unsigned(std::min<std::size_t>(workers, n));
    threads.reserve(count);
    for (unsigned t = 0; t < count; ++t) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
}

} // namespace arithwave
