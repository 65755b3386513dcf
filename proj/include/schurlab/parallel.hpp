// parallel.hpp - bounded fan-out for independent restarts and slice solves.

#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace schurlab {

/// Worker cap: OPINT_THREADS when set to a positive integer, else the hardware concurrency.
std::size_t thread_budget();

/// Calls fn(i) for i in [0, count). Results must be written to per-index slots;
/// the first exception thrown by any call is rethrown after all workers join.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const std::size_t workers = std::min(thread_budget(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
    }
    if (failure) std::rethrow_exception(failure);
}

} // namespace schurlab
