#pragma once

#include <cstdint>
#include <vector>

#include "hmsim/analytic.hpp"
#include "hmsim/geometry.hpp"
#include "hmsim/random.hpp"

namespace hmsim
{
struct TrialRecord
{
    std::uint64_t index{0};
    double lambda{0};  //!< break point, axis coordinate
    Outcome outcome{Outcome::O1};
    SphereState post;
};

struct FrequencyTable
{
    std::uint64_t o1{0};
    std::uint64_t o2{0};

    std::uint64_t total() const { return o1 + o2; }
    std::uint64_t count(Outcome o) const { return o == Outcome::O1 ? o1 : o2; }
    double frequency(Outcome o) const
    {
        return static_cast<double>(count(o)) / static_cast<double>(total());
    }
    void add(Outcome o) { (o == Outcome::O1 ? o1 : o2) += 1; }
    FrequencyTable& operator+=(FrequencyTable const& other)
    {
        o1 += other.o1;
        o2 += other.o2;
        return *this;
    }
    bool operator==(FrequencyTable const&) const = default;
};

struct Measurement
{
    Outcome outcome{Outcome::O1};
    SphereState post;
    double lambda{0};
};

// Uniform on [d - eps, d + eps]; exactly d when eps = 0. Consumes one draw.
double sample_break_point(ElasticSpec const& e, RandomStream& rng);

/*!
 * Deterministic hidden measurement e_u^lambda.
 *
 * O1 (post state u) when lambda < v.u, O2 (post state -u) when lambda > v.u.
 * The exact tie is settled by a fair coin drawn from \c rng.
 */
Measurement
hidden_outcome(Direction const& v, Direction const& u, double lambda, RandomStream& rng);

// Same, with the particle given by its axis coordinate t
Outcome hidden_outcome_at(double t, double lambda, RandomStream& rng);

// Break the elastic at a random point, then apply the hidden measurement
Measurement
measure(Direction const& v, Direction const& u, ElasticSpec const& e, RandomStream& rng);

struct TrialOptions
{
    std::uint64_t n{1};
    std::uint64_t seed{0};
    unsigned workers{1};
};

/*!
 * Aggregate n independent measurements; trial i uses substream i of the
 * seed, so the table depends only on (seed, n).
 */
FrequencyTable run_trials(Direction const& v,
                          Direction const& u,
                          ElasticSpec const& e,
                          TrialOptions const& opts);

// Same trials as run_trials, retaining every record (serial)
std::vector<TrialRecord> run_trials_recorded(Direction const& v,
                                             Direction const& u,
                                             ElasticSpec const& e,
                                             std::uint64_t n,
                                             std::uint64_t seed);

}  // namespace hmsim
