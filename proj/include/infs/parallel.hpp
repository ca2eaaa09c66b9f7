#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace infs {

// Process-wide worker count, set once by the CLI --threads flag.
// 0 means "use hardware concurrency".
inline std::atomic<unsigned>& thread_count_slot() {
    static std::atomic<unsigned> count{0};
    return count;
}

inline void set_thread_count(unsigned n) { thread_count_slot().store(n); }

inline unsigned effective_thread_count() {
    unsigned n = thread_count_slot().load();
    if (n == 0) n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

// Runs fn(i) for i in [0, n). Each index writes only its own output slot,
// so the result is bitwise identical for any worker count. Exceptions are
// captured and rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    unsigned workers = effective_thread_count();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (workers > n) workers = static_cast<unsigned>(n);

    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);

    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                    fn(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
                next.store(n);  // stop handing out work
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace infs
