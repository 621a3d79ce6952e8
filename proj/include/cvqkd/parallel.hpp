#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace cvqkd {

inline unsigned worker_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs fn(i) for i in [begin, end). Work items must be independent;
// results keyed by index stay deterministic regardless of scheduling.
template <class Fn>
void parallel_for(std::uint64_t begin, std::uint64_t end, Fn&& fn, unsigned threads = 0) {
    if (threads == 0) threads = worker_count();
    const std::uint64_t count = end > begin ? end - begin : 0;
    if (count == 0) return;
    if (threads <= 1 || count == 1) {
        for (std::uint64_t i = begin; i < end; ++i) fn(i);
        return;
    }
    std::atomic<std::uint64_t> next{begin};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= end) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const unsigned nthreads = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
    pool.reserve(nthreads - 1);
    for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

}  // namespace cvqkd
