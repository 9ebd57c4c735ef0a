#ifndef CFIE_SRC_PARALLEL_HPP
#define CFIE_SRC_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace cfie::detail {

// Worker count: CFIE_THREADS when set to a positive integer, hardware
// concurrency otherwise ("0", absent, or malformed all mean auto).
inline unsigned configured_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const char* env = std::getenv("CFIE_THREADS");
    if (env == nullptr || *env == '\0') return hw;
    char* end = nullptr;
    unsigned long parsed = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0') return hw;
    if (parsed == 0) return hw;
    if (parsed > 256) parsed = 256;
    return static_cast<unsigned>(parsed);
}

// Runs fn(i) for i in [0, n). Work is claimed through a shared counter so
// results must be written to index-addressed slots; the schedule never
// influences output content.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    unsigned workers = configured_threads();
    if (workers > n) workers = static_cast<unsigned>(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace cfie::detail

#endif
