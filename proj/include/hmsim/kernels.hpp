#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace hmsim::kernels
{
enum class Backend
{
    scalar,
    avx2,
};

std::string_view to_string(Backend b);
Backend backend_from_string(std::string_view name);

bool backend_available(Backend b);
Backend best_available_backend();
Backend active_backend();
// Throws ValidationError if the backend is not available on this CPU
void set_backend(Backend b);

struct TrialCounts
{
    std::uint64_t below{0};  //!< break point strictly below t
    std::uint64_t ties{0};   //!< break point exactly at t

    TrialCounts& operator+=(TrialCounts const& other)
    {
        below += other.below;
        ties += other.ties;
        return *this;
    }
};

/*!
 * Classify a contiguous block of single-measurement trials.
 *
 * Trial i draws u from draw 0 of substream i of the hashed seed and breaks
 * the elastic at lambda = lower + width * u. Counts how many lambdas fall
 * strictly below t and how many hit t exactly.
 */
TrialCounts classify_trials(std::uint64_t hashed_seed,
                            std::uint64_t first,
                            std::uint64_t count,
                            double lower,
                            double width,
                            double t);

// Sums over the values strictly above the level c
struct CutStats
{
    double excess{0};       //!< sum of max(v - c, 0)
    double active_sum{0};   //!< sum of v over v > c
    std::uint64_t active{0};
};

// Accumulated in four interleaved lanes, combined as (l0 + l1) + (l2 + l3)
CutStats cut_stats(std::span<double const> values, double c);

//! Explicit backends, for equivalence tests and benchmarks.
namespace scalar
{
TrialCounts classify_trials(std::uint64_t, std::uint64_t, std::uint64_t, double, double, double);
CutStats cut_stats(std::span<double const>, double);
}  // namespace scalar

namespace avx2
{
TrialCounts classify_trials(std::uint64_t, std::uint64_t, std::uint64_t, double, double, double);
CutStats cut_stats(std::span<double const>, double);
}  // namespace avx2

}  // namespace hmsim::kernels
