#pragma once

// Deterministic replica parallelism. Work is partitioned over replica
// indices; each result lands in its own slot, and aggregation folds the
// slots in replica order. Estimates therefore do not depend on the thread
// count or on completion order.

#include <atomic>
#include <cstdlib>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

namespace percolab {

namespace detail {
inline std::atomic<std::size_t>& thread_override() {
    static std::atomic<std::size_t> v{0};
    return v;
}
} // namespace detail

inline void set_thread_count(std::size_t n) { detail::thread_override() = n; }

inline std::size_t thread_count() {
    std::size_t n = detail::thread_override().load();
    if (n > 0) return n;
    if (const char* env = std::getenv("PERCOLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// f(i) is invoked once for each i in [0, count); partition is contiguous.
template <class F>
void parallel_for(std::size_t count, F&& f) {
    const std::size_t workers = std::min(thread_count(), count == 0 ? std::size_t{1} : count);
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &f] {
            for (std::size_t i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& t : pool) t.join();
}

// map over replica indices into an ordered result vector
template <class T, class F>
std::vector<T> replica_map(std::size_t replicas, F&& f) {
    std::vector<T> out(replicas);
    parallel_for(replicas, [&](std::size_t r) { out[r] = f(r); });
    return out;
}

} // namespace percolab
