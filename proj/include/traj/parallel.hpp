#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace traj {

// Static interleaved scheduling: worker w handles indices w, w+threads, ...
// Callers must write results into per-index slots so output is identical for
// any thread count.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    if (threads < 1) threads = 1;
    if (threads == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t stride = static_cast<std::size_t>(threads);
    std::vector<std::thread> pool;
    pool.reserve(stride);
    for (std::size_t w = 0; w < stride; ++w) {
        pool.emplace_back([&fn, w, n, stride] {
            for (std::size_t i = w; i < n; i += stride) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace traj
