#include "hmsim/sampler.hpp"

#include "hmsim/error.hpp"
#include "hmsim/kernels.hpp"
#include "hmsim/parallel.hpp"

namespace hmsim
{
double sample_break_point(ElasticSpec const& e, RandomStream& rng)
{
    // Must match kernels::classify_trials exactly: lower + width * u
    double const u = rng.uniform();
    return e.lower() + (2 * e.epsilon()) * u;
}

Outcome hidden_outcome_at(double t, double lambda, RandomStream& rng)
{
    if (lambda < t)
        return Outcome::O1;
    if (lambda > t)
        return Outcome::O2;
    return rng.uniform() < 0.5 ? Outcome::O1 : Outcome::O2;
}

Measurement
hidden_outcome(Direction const& v, Direction const& u, double lambda, RandomStream& rng)
{
    Outcome const o = hidden_outcome_at(axis_coordinate(v, u), lambda, rng);
    return {o, SphereState{o == Outcome::O1 ? u : -u}, lambda};
}

Measurement
measure(Direction const& v, Direction const& u, ElasticSpec const& e, RandomStream& rng)
{
    double const lambda = sample_break_point(e, rng);
    return hidden_outcome(v, u, lambda, rng);
}

FrequencyTable run_trials(Direction const& v,
                          Direction const& u,
                          ElasticSpec const& e,
                          TrialOptions const& opts)
{
    if (opts.n == 0)
    {
        throw ValidationError("number of trials must be positive");
    }
    double const t = axis_coordinate(v, u);
    std::uint64_t const hashed = seed_hash(opts.seed);
    std::uint64_t const blocks = num_trial_blocks(opts.n);
    std::vector<FrequencyTable> partial(blocks);

    parallel_for_blocks(blocks, opts.workers, [&](std::uint64_t b) {
        std::uint64_t const first = b * trial_block_size;
        std::uint64_t const count = std::min(trial_block_size, opts.n - first);
        auto const c = kernels::classify_trials(
            hashed, first, count, e.lower(), 2 * e.epsilon(), t);
        FrequencyTable table;
        if (c.ties == 0)
        {
            table.o1 = c.below;
            table.o2 = count - c.below;
        }
        else
        {
            // Rare path (always taken for eps = 0 at t = d): replay per trial
            for (std::uint64_t i = first; i < first + count; ++i)
            {
                RandomStream rng(opts.seed, i);
                double const lambda = sample_break_point(e, rng);
                table.add(hidden_outcome_at(t, lambda, rng));
            }
        }
        partial[b] = table;
    });

    FrequencyTable total;
    for (auto const& p : partial)
        total += p;
    return total;
}

std::vector<TrialRecord> run_trials_recorded(Direction const& v,
                                             Direction const& u,
                                             ElasticSpec const& e,
                                             std::uint64_t n,
                                             std::uint64_t seed)
{
    if (n == 0)
    {
        throw ValidationError("number of trials must be positive");
    }
    std::vector<TrialRecord> records;
    records.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i)
    {
        RandomStream rng(seed, i);
        auto const m = measure(v, u, e, rng);
        records.push_back({i, m.lambda, m.outcome, m.post});
    }
    return records;
}

}  // namespace hmsim
