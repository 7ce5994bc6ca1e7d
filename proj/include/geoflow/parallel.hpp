#ifndef GEOFLOW_PARALLEL_HPP
#define GEOFLOW_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace geoflow {

/// Global worker cap for parallel loops (0 = hardware concurrency).
/// CLI sets this from --threads.
inline std::atomic<unsigned>& worker_cap() {
    static std::atomic<unsigned> cap{0};
    return cap;
}

/// Index-parallel loop. The body must write results keyed by index so the
/// output ordering is deterministic regardless of scheduling.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    unsigned cap = worker_cap().load();
    unsigned hw = cap ? cap : std::max(1u, std::thread::hardware_concurrency());
    if (hw <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    unsigned nthreads = static_cast<unsigned>(std::min<std::size_t>(hw, count));
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) {
        pool.emplace_back([&]() {
            while (!failed.load(std::memory_order_relaxed)) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) break;
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    break;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace geoflow

#endif
