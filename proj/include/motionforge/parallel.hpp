#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace motionforge {

/// Worker cap from MOTIONFORGE_THREADS; defaults to 1 (fully sequential,
/// deterministic) when unset or unparsable.
inline int thread_cap() {
    const char* env = std::getenv("MOTIONFORGE_THREADS");
    if (env == nullptr) {
        return 1;
    }
    const int n = std::atoi(env);
    return (n >= 1) ? n : 1;
}

/// Run fn(i) for i in [0, n). Items must be independent; each writes only
/// its own output slot, so results are identical however the range is
/// divided.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int cap = thread_cap();
    if (cap <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cap), n);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (std::size_t t = 0; t < workers; ++t) {
        threads.emplace_back([&, t]() {
            for (std::size_t i = t; i < n; i += workers) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) {
                        first_error = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& th : threads) {
        th.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

} // namespace motionforge
