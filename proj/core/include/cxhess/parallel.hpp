#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cxhess {

// Process-wide cap on worker threads; 0 means hardware_concurrency.
void set_max_threads(unsigned n) noexcept;
unsigned max_threads() noexcept;

// Runs body(i) for i in [0, count). Each index is visited exactly once, so
// bodies that write only to slot i give results independent of thread count.
template <class Body>
void parallel_for(std::size_t count, Body&& body, std::size_t min_chunk = 64) {
    const unsigned cap = max_threads();
    const std::size_t workers =
        std::min<std::size_t>(cap, (count + min_chunk - 1) / std::max<std::size_t>(min_chunk, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace cxhess
