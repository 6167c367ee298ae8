#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace revspec::par {

inline int max_threads() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("REVSPEC_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    return hw;
}

// Index-space parallel loop; deterministic as long as the body only writes
// to its own index. Exceptions are collected and the first one rethrown.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
    const int nthreads = std::min<std::size_t>(max_threads(), n);
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                    body(i);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace revspec::par
