#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace sfhf::detail {

// Worker count: SFHF_THREADS when set to a positive integer, else the
// hardware concurrency.
inline std::size_t thread_count()
{
    if (const char* env = std::getenv("SFHF_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0)
            return static_cast<std::size_t>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(k) for k in [0, count) on a small thread pool. Callers write only
// slot k, so results do not depend on the schedule.
template <class F>
void parallel_for(std::size_t count, F fn)
{
    const std::size_t workers = std::min(count, thread_count());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < count; k = next++)
            fn(k);
    };
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(work);
    work();
}

}  // namespace sfhf::detail
