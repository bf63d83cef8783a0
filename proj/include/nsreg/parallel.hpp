#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nsreg {

/// Worker count from NSREG_THREADS (default 1).
inline unsigned thread_count() {
    if (const char* s = std::getenv("NSREG_THREADS")) {
        int v = std::atoi(s);
        if (v > 0) return unsigned(v);
    }
    return 1;
}

/// Runs fn(i) for i in [0, count). Results must be written to per-index slots,
/// which keeps the reduction order deterministic. Rethrows the first error.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    unsigned workers = std::min<unsigned>(thread_count(), unsigned(count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex m;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < count;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(m);
                    if (!error) error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace nsreg
