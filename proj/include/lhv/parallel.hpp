#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace lhv {

/// Execution settings. Results never depend on them.
struct ExecutionPolicy {
    unsigned workers = 0; ///< 0 selects std::thread::hardware_concurrency()

    [[nodiscard]] unsigned resolved_workers() const noexcept
    {
        if (workers != 0)
            return workers;
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1u : hw;
    }
};

/// Calls body(i) for every i in [0, n) on up to `workers` threads, handing out
/// small blocks of indices on demand. body must only write state owned by its
/// index. If any call throws, the exception of the lowest failing index is
/// rethrown after all threads finish.
template <class Body>
void parallel_for(std::size_t n, const ExecutionPolicy &policy, Body &&body)
{
    const std::size_t workers = std::min<std::size_t>(policy.resolved_workers(), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }

    constexpr std::size_t block = 8;
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_index = std::numeric_limits<std::size_t>::max();
    std::exception_ptr error;

    auto worker = [&] {
        for (;;) {
            const std::size_t begin = next.fetch_add(block);
            if (begin >= n)
                return;
            const std::size_t end = std::min(n, begin + block);
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (i < error_index) {
                        error_index = i;
                        error = std::current_exception();
                    }
                }
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back(worker);
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace lhv
