#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace pvc {

/// Worker count: min(hardware, PVC_THREADS) with PVC_THREADS > 0 when set.
inline int thread_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("PVC_THREADS")) {
        int cap = std::atoi(env);
        if (cap > 0) hw = std::min(hw, cap);
    }
    return hw;
}

/// Static block partition of [0, n) across workers. Each index is processed by
/// exactly one thread, so writes to index-addressed slots race-free; the result
/// does not depend on the worker count.
template <class Fn>
void parallel_for(long n, Fn&& body, int threads = 0) {
    if (threads <= 0) threads = thread_count();
    threads = static_cast<int>(std::min<long>(threads, std::max<long>(n, 1)));
    if (threads <= 1 || n < 2) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    long chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        long lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (long i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace pvc
