#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hmsim
{
// Fixed trial-block size: partitioning never depends on the worker count
inline constexpr std::uint64_t trial_block_size = 1u << 14;

/*!
 * Run \c fn(block) for every block in [0, num_blocks) on up to \c workers
 * threads. Blocks are claimed dynamically; callers store per-block results
 * by index and combine them afterwards, so output is order-independent.
 */
template<class F>
void parallel_for_blocks(std::uint64_t num_blocks, unsigned workers, F&& fn)
{
    unsigned const threads
        = static_cast<unsigned>(std::min<std::uint64_t>(std::max(workers, 1u), num_blocks));
    if (threads <= 1)
    {
        for (std::uint64_t b = 0; b < num_blocks; ++b)
            fn(b);
        return;
    }

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try
        {
            for (std::uint64_t b = next++; b < num_blocks; b = next++)
                fn(b);
        }
        catch (...)
        {
            std::lock_guard lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
            next = num_blocks;
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

inline std::uint64_t num_trial_blocks(std::uint64_t n)
{
    return (n + trial_block_size - 1) / trial_block_size;
}

}  // namespace hmsim
