#ifndef LOWTWIST_PARALLEL_HPP
#define LOWTWIST_PARALLEL_HPP

#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lowtwist {

// Deterministic work partitioning: item i goes to worker i % workers, each
// worker owns a disjoint index set, results are merged by the caller in a
// schedule-independent order (per-item slots or a final sort). fn(worker, i)
// must not touch shared mutable state. The first exception thrown by any
// worker is rethrown after the join.
template <typename Fn>
void parallel_items(int workers, uint64_t n_items, Fn&& fn) {
    if (workers <= 1 || n_items <= 1) {
        for (uint64_t i = 0; i < n_items; ++i) fn(0, i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([w, workers, n_items, &fn, &first_error, &error_mutex] {
            try {
                for (uint64_t i = static_cast<uint64_t>(w); i < n_items; i += workers)
                    fn(w, i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}

#endif
