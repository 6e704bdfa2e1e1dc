#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <algorithm>
#include <mutex>
#include <thread>
#include <vector>

namespace microloc {

/// Worker count: MICROLOC_THREADS if set and positive, else the hardware concurrency.
unsigned thread_count();

/// Runs fn(i) for i in [0, n). Work is handed out by index so results that depend
/// only on i are identical for every thread count. The first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned workers = std::min<std::size_t>(thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(n);
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace microloc
