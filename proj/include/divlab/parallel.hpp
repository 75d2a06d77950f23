#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace divlab {

/// Worker cap: DIVLAB_THREADS when set, hardware concurrency otherwise.
inline int worker_count() {
    if (const char* env = std::getenv("DIVLAB_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Run fn(0..n-1) across workers. fn(i) must only touch slot i of any shared
/// output, which keeps results identical for every worker count.
template <class Fn>
void parallel_for(long n, Fn&& fn, int workers = worker_count()) {
    if (n <= 0) return;
    if (workers > n) workers = static_cast<int>(n);
    if (workers <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    const long chunk = std::max(1L, n / (8L * workers));

    auto work = [&] {
        for (;;) {
            long begin = next.fetch_add(chunk);
            if (begin >= n || failed.load()) return;
            long end = std::min(n, begin + chunk);
            try {
                for (long i = begin; i < end; ++i) fn(i);
            } catch (...) {
                if (!failed.exchange(true)) first_error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (failed.load() && first_error) std::rethrow_exception(first_error);
}

} // namespace divlab
