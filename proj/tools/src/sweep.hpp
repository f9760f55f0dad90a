#pragma once

// Fixed-size worker pool over independent sweep points.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace spherent::cli {

/// results[i] = f(i), evaluated by up to `threads` workers. Results land in
/// index order regardless of scheduling. If any call throws, the exception of
/// the lowest failing index is rethrown after all workers stop.
template <class F>
auto parallel_map(std::size_t n, unsigned threads, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
    using R = std::invoke_result_t<F&, std::size_t>;
    std::vector<R> results(n);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::size_t first_index = n;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n || stop.load()) {
                return;
            }
            try {
                results[i] = f(i);
            } catch (...) {
                std::lock_guard lock(err_mutex);
                if (i < first_index) {
                    first_index = i;
                    first_error = std::current_exception();
                }
                stop = true;
            }
        }
    };

    const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(count);
        for (unsigned t = 0; t < count; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
    return results;
}

}  // namespace spherent::cli
