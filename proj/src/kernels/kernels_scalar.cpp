#include <array>

#include "hmsim/kernels.hpp"
#include "hmsim/random.hpp"

namespace hmsim::kernels::scalar
{
TrialCounts classify_trials(std::uint64_t hashed_seed,
                            std::uint64_t first,
                            std::uint64_t count,
                            double lower,
                            double width,
                            double t)
{
    TrialCounts result;
    for (std::uint64_t i = first; i < first + count; ++i)
    {
        double const u = to_unit(stream_draw(substream_key(hashed_seed, i), 0));
        double const lambda = lower + width * u;
        result.below += lambda < t;
        result.ties += lambda == t;
    }
    return result;
}

CutStats cut_stats(std::span<double const> values, double c)
{
    std::array<double, 4> excess{};
    std::array<double, 4> active_sum{};
    std::uint64_t active = 0;

    std::size_t const n = values.size();
    std::size_t const blocked = n - n % 4;
    for (std::size_t i = 0; i < blocked; i += 4)
    {
        for (std::size_t lane = 0; lane < 4; ++lane)
        {
            double const v = values[i + lane];
            double const diff = v - c;
            excess[lane] += diff > 0 ? diff : 0.0;
            if (v > c)
            {
                active_sum[lane] += v;
                ++active;
            }
        }
    }
    for (std::size_t i = blocked; i < n; ++i)
    {
        std::size_t const lane = i - blocked;
        double const v = values[i];
        double const diff = v - c;
        excess[lane] += diff > 0 ? diff : 0.0;
        if (v > c)
        {
            active_sum[lane] += v;
            ++active;
        }
    }
    return {(excess[0] + excess[1]) + (excess[2] + excess[3]),
            (active_sum[0] + active_sum[1]) + (active_sum[2] + active_sum[3]),
            active};
}

}  // namespace hmsim::kernels::scalar
