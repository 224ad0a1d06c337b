#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace coarse {

// chunked parallel loop over [0, n); body must be pure per index
inline void parallel_for(size_t n, const std::function<void(size_t, size_t)>& chunk_body,
                         unsigned threads = 0) {
    if (threads == 0) threads = std::thread::hardware_concurrency();
    if (threads <= 1 || n < 2048) {
        chunk_body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    size_t per = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        size_t lo = t * per, hi = std::min(n, lo + per);
        if (lo >= hi) break;
        pool.emplace_back([&chunk_body, lo, hi] { chunk_body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

} // namespace coarse
