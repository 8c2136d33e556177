#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace adjvar {

namespace detail {
inline std::atomic<unsigned> max_threads{0};
inline thread_local bool in_worker = false;
}

// Global cap on worker threads; 0 means hardware concurrency.
inline void set_max_threads(unsigned n) { detail::max_threads.store(n); }

inline unsigned max_threads() {
    const unsigned cap = detail::max_threads.load();
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    return cap == 0 ? hw : cap;
}

// Runs fn(begin, end) over contiguous chunks of [0, n). Chunk boundaries depend
// only on n and the thread count; callers write to disjoint output slots.
// Nested calls from inside a worker run inline.
template <class Fn>
void parallel_for_chunks(std::size_t n, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(max_threads(), std::max<std::size_t>(n, 1));
    if (workers <= 1 || n < 2 || detail::in_worker) {
        if (n > 0) fn(std::size_t{0}, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        threads.emplace_back([&, begin, end] {
            detail::in_worker = true;
            try {
                fn(begin, end);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    threads.clear();
    if (error) std::rethrow_exception(error);
}

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    parallel_for_chunks(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
    });
}

}  // namespace adjvar
