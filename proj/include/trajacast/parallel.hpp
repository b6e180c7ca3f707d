#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace trajacast {

/// Worker count from TRAJACAST_JOBS, else the hardware concurrency.
std::size_t default_jobs();

/// Calls fn(i) for i in [0, n) on up to `jobs` threads. Each index is handled
/// exactly once, so writing into slot i of a pre-sized vector is race free and
/// the result does not depend on scheduling. The first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next = n;
            }
        }
    };
    std::vector<std::jthread> threads;
    const auto count = jobs < n ? jobs : n;
    for (std::size_t t = 1; t < count; ++t) {
        threads.emplace_back(worker);
    }
    worker();
    threads.clear();
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace trajacast
