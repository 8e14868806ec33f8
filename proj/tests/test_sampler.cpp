#include <array>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hmsim/analytic.hpp"
#include "hmsim/error.hpp"
#include "hmsim/kernels.hpp"
#include "hmsim/sampler.hpp"

using namespace hmsim;

namespace
{
Direction const up{0, 0, 1};

// 4-sigma band for a binomial frequency
double band(double p, double n)
{
    return 4 * std::sqrt(std::max(p * (1 - p), 1e-300) / n);
}

FrequencyTable loop_trials(Direction const& v, ElasticSpec const& e, std::uint64_t n,
                           std::uint64_t seed)
{
    FrequencyTable t;
    for (std::uint64_t i = 0; i < n; ++i)
    {
        RandomStream r{seed, i};
        t.add(measure(v, up, e, r).outcome);
    }
    return t;
}
}  // namespace

TEST_CASE("break point distribution")
{
    ElasticSpec e{1, 0};
    RandomStream r{1, 0};
    constexpr int n = 1'000'000;
    double sum = 0, lo = 1, hi = -1;
    for (int i = 0; i < n; ++i)
    {
        double x = sample_break_point(e, r);
        sum += x;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    CHECK(std::abs(sum / n) < 0.002);
    CHECK(lo >= -1.0);
    CHECK(lo < -0.999);
    CHECK(hi < 1.0);
    CHECK(hi > 0.999);

    ElasticSpec sharp{0, 0.3};
    CHECK(sample_break_point(sharp, r) == 0.3);
}

TEST_CASE("single measurements")
{
    SUBCASE("equator, eps = 1")
    {
        auto v = Direction::from_spherical(std::numbers::pi / 2, 0);
        auto t = run_trials(v, up, ElasticSpec{1, 0}, {1'000'000, 7, 1});
        CHECK(std::abs(t.frequency(Outcome::O1) - 0.5) < 0.002);
    }
    SUBCASE("saturated region is deterministic")
    {
        auto v = direction_with_axis_coordinate(0.8);
        ElasticSpec e{0.5, 0.2};
        for (std::uint64_t i = 0; i < 1000; ++i)
        {
            RandomStream r{3, i};
            auto m = measure(v, up, e, r);
            CHECK(m.outcome == Outcome::O1);
            CHECK(m.post.position.approx_equal(up));
        }
    }
    SUBCASE("linear region")
    {
        auto v = direction_with_axis_coordinate(0.45);
        auto t = run_trials(v, up, ElasticSpec{0.5, 0.2}, {1'000'000, 8, 1});
        CHECK(std::abs(t.frequency(Outcome::O1) - 0.75) < 0.002);
    }
    SUBCASE("eps = 0 below the threshold")
    {
        auto v = direction_with_axis_coordinate(-0.1);
        auto t = run_trials(v, up, ElasticSpec{0, 0}, {10'000, 9, 1});
        CHECK(t.o2 == 10'000);
    }
    SUBCASE("theta = 60 degrees")
    {
        auto v = Direction::from_spherical(std::numbers::pi / 3, 0);
        auto t = run_trials(v, up, ElasticSpec{1, 0}, {1'000'000, 42, 1});
        CHECK(std::abs(t.frequency(Outcome::O1) - 0.75) < 0.002);
    }
}

TEST_CASE("exact tie uses a fair coin")
{
    // eps = 0 at t = d: every trial is a tie
    auto v = direction_with_axis_coordinate(0.0);
    auto t = run_trials(v, up, ElasticSpec{0, 0}, {100'000, 4, 1});
    CHECK(std::abs(t.frequency(Outcome::O1) - 0.5) < band(0.5, 1e5));
    CHECK(t == loop_trials(v, ElasticSpec{0, 0}, 100'000, 4));
}

TEST_CASE("n = 0 is rejected")
{
    CHECK_THROWS_AS(run_trials(up, up, ElasticSpec{1, 0}, {0, 1, 1}), ValidationError);
}

TEST_CASE("aggregate equals the per-trial loop")
{
    for (auto [t, eps, d] : std::array<std::array<double, 3>, 5>{
             {{0.3, 1, 0}, {0.45, 0.5, 0.2}, {-0.9, 0.1, -0.85}, {0.0, 0.0, 0.0}, {1.0, 1, 0}}})
    {
        auto v = direction_with_axis_coordinate(t);
        ElasticSpec e{eps, d};
        auto loop = loop_trials(v, e, 40'000, 77);
        auto agg = run_trials(v, up, e, {40'000, 77, 1});
        CHECK(loop == agg);

        auto recs = run_trials_recorded(v, up, e, 40'000, 77);
        FrequencyTable from_recs;
        for (auto const& r : recs) from_recs.add(r.outcome);
        CHECK(from_recs == agg);
    }
}

TEST_CASE("results are independent of worker count and backend")
{
    auto v = Direction::from_spherical(1.1, 0.4);
    ElasticSpec e{0.7, 0.1};
    auto base = run_trials(v, up, e, {100'003, 5, 1});
    for (unsigned w : {2u, 3u, 8u})
    {
        CHECK(run_trials(v, up, e, {100'003, 5, w}) == base);
    }
    auto saved = kernels::active_backend();
    kernels::set_backend(kernels::Backend::scalar);
    CHECK(run_trials(v, up, e, {100'003, 5, 3}) == base);
    kernels::set_backend(saved);
}

TEST_CASE("determinism of records")
{
    auto v = Direction::from_spherical(0.9, 0.0);
    auto a = run_trials_recorded(v, up, ElasticSpec{1, 0}, 1000, 3);
    auto b = run_trials_recorded(v, up, ElasticSpec{1, 0}, 1000, 3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        CHECK(a[i].lambda == b[i].lambda);
        CHECK(a[i].outcome == b[i].outcome);
    }
}

TEST_CASE("repeated measurement along the same axis is repeatable")
{
    ElasticSpec e{0.6, 0.1};
    auto v = Direction::from_spherical(1.3, 2.0);
    for (std::uint64_t i = 0; i < 2000; ++i)
    {
        RandomStream r{10, i};
        auto first = measure(v, up, e, r);
        auto second = measure(first.post.position, up, e, r);
        CHECK(second.outcome == first.outcome);
        CHECK(second.post.position.approx_equal(first.post.position));
    }
}

TEST_CASE("conditional on the break point the outcome is a threshold rule")
{
    ElasticSpec e{1, 0};
    double t = 0.2;
    auto v = direction_with_axis_coordinate(t);
    constexpr int bins = 20;
    std::array<FrequencyTable, bins> by_bin{};
    for (std::uint64_t i = 0; i < 200'000; ++i)
    {
        RandomStream r{12, i};
        auto m = measure(v, up, e, r);
        int b = std::min(bins - 1, static_cast<int>((m.lambda + 1) / 2 * bins));
        by_bin[b].add(m.outcome);
        CHECK((m.outcome == Outcome::O1) == (m.lambda < t));
    }
    // bins entirely below t are all O1, entirely above all O2
    for (int b = 0; b < bins; ++b)
    {
        double lo = -1 + 2.0 * b / bins, hi = -1 + 2.0 * (b + 1) / bins;
        if (hi <= t) CHECK(by_bin[b].o2 == 0);
        if (lo >= t) CHECK(by_bin[b].o1 == 0);
    }
}

TEST_CASE("Monte Carlo agrees with the analytic model on a grid")
{
    std::uint64_t seed = 100;
    for (double eps : {0.0, 0.25, 0.5, 1.0})
    {
        for (double d : {-0.3, 0.0, 0.2})
        {
            if (!ElasticSpec::is_valid(eps, d)) continue;
            ElasticSpec e{eps, d};
            for (double th : {0.0, 30.0, 60.0, 90.0, 120.0, 150.0, 180.0})
            {
                auto v = direction_in_xz_deg(th);
                double p = epsilon_probabilities(v, up, e).p1;
                auto tab = run_trials(v, up, e, {50'000, ++seed, 1});
                CHECK(std::abs(tab.frequency(Outcome::O1) - p) <= band(p, 5e4) + 1e-12);
            }
        }
    }
}
