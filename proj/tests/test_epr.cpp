#include <cmath>
#include <map>
#include <set>
#include <numbers>

#include "doctest.h"
#include "hmsim/epr.hpp"
#include "hmsim/error.hpp"

using namespace hmsim;

namespace
{
double const sqrt2x2 = 2 * std::numbers::sqrt2;

// Correlation derived by hand from the rod picture: the partner lands on
// -a or +a with equal weight, then faces the clamp model along b
double oracle_correlation(double ab, double eps)
{
    if (eps == 0) return ab > 0 ? -1.0 : (ab < 0 ? 1.0 : 0.0);
    return -std::clamp(ab / eps, -1.0, 1.0);
}

double band(double e, double n)
{
    return 4 * std::sqrt(std::max(1 - e * e, 0.0) / n);
}
}  // namespace

TEST_CASE("pair state before and after measurement")
{
    EntangledPair p;
    CHECK_FALSE(p.localized());
    RandomStream r{1, 0};
    CHECK_THROWS_AS(p.measure_right(Direction{0, 0, 1}, ElasticSpec{1, 0}, r),
                    std::logic_error);
    p.measure_left(Direction{0, 0, 1}, ElasticSpec{1, 0}, r);
    REQUIRE(p.localized());
    CHECK(p.right()->approx_equal(-*p.left()));
}

TEST_CASE("wing specs require a centered left elastic")
{
    CHECK_THROWS_AS(WingSpecs(ElasticSpec{0.5, 0.2}, ElasticSpec{1, 0}), ValidationError);
    CHECK_NOTHROW(WingSpecs(ElasticSpec{0.5, 0}, ElasticSpec{0.5, 0.2}));
}

TEST_CASE("same axis, eps = 1: perfect anti-correlation")
{
    auto a = direction_in_xz_deg(37);
    auto c = run_pair_trials(a, a, ElasticSpec{1, 0}, {200'000, 3, 1, PairModel::rod});
    CHECK(c.counts[0][0] == 0);
    CHECK(c.counts[1][1] == 0);
    CHECK(c.correlation() == -1.0);
}

TEST_CASE("perpendicular axes, eps = 1: joint frequencies 1/4")
{
    auto c = run_pair_trials(direction_in_xz_deg(0), direction_in_xz_deg(90),
                             ElasticSpec{1, 0}, {1'000'000, 4, 1, PairModel::rod});
    for (auto const& row : c.counts)
        for (auto n : row) CHECK(std::abs(n / 1e6 - 0.25) < 0.002);
}

TEST_CASE("eps = 0: right outcome is a function of the left one")
{
    auto a = direction_in_xz_deg(0);
    auto b = direction_in_xz_deg(50);
    std::map<int, std::set<int>> seen;
    for (std::uint64_t i = 0; i < 5000; ++i)
    {
        RandomStream r{8, i};
        auto o = measure_pair(a, b, ElasticSpec{0, 0}, r);
        seen[static_cast<int>(o.left)].insert(static_cast<int>(o.right));
    }
    // the left coin took both values
    REQUIRE(seen.size() == 2);
    for (auto const& [l, rights] : seen) CHECK(rights.size() == 1);
}

TEST_CASE("analytic correlation examples")
{
    auto a = direction_in_xz_deg(0);
    CHECK(correlation_analytic(a, direction_in_xz_deg(60), ElasticSpec{1, 0})
          == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(std::abs(correlation_analytic(a, direction_in_xz_deg(90), ElasticSpec{0.5, 0}))
          < 1e-15);
    // a.b = 0.25 with eps = 0.5
    auto b = Direction{std::sqrt(1 - 0.0625), 0, 0.25};
    CHECK(correlation_analytic(Direction{0, 0, 1}, b, ElasticSpec{0.5, 0})
          == doctest::Approx(-0.5).epsilon(1e-14));
    for (double eps : {0.0, 0.3, 1.0})
    {
        CHECK(correlation_analytic(a, a, ElasticSpec{eps, 0}) == -1.0);
    }
}

TEST_CASE("analytic correlation against the hand oracle")
{
    for (double eps : {0.0, 0.2, 0.5, 0.8, 1.0})
    {
        for (int k = 0; k <= 36; ++k)
        {
            double deg = 5.0 * k + 0.5;
            auto a = direction_in_xz_deg(0);
            auto b = direction_in_xz_deg(deg);
            double ab = axis_coordinate(a, b);
            double e = correlation_analytic(a, b, ElasticSpec{eps, 0});
            CHECK(e == doctest::Approx(oracle_correlation(ab, eps)).epsilon(1e-12));
            // symmetric in the two settings, odd under b -> -b
            CHECK(correlation_analytic(b, a, ElasticSpec{eps, 0})
                  == doctest::Approx(e).epsilon(1e-12));
            CHECK(correlation_analytic(a, -b, ElasticSpec{eps, 0})
                  == doctest::Approx(-e).epsilon(1e-12));
        }
    }
}

TEST_CASE("Monte Carlo correlation matches the analytic value")
{
    std::uint64_t seed = 50;
    for (double eps : {0.0, 0.4, 1.0})
    {
        for (double deg : {0.0, 30.0, 60.0, 89.0, 120.0, 170.0})
        {
            auto a = direction_in_xz_deg(10);
            auto b = direction_in_xz_deg(10 + deg);
            double e = correlation_analytic(a, b, ElasticSpec{eps, 0});
            auto c = run_pair_trials(a, b, ElasticSpec{eps, 0}, {100'000, ++seed, 1, PairModel::rod});
            CHECK(std::abs(c.correlation() - e) <= band(e, 1e5) + 1e-12);
        }
    }
}

TEST_CASE("measurement order does not change the joint distribution")
{
    auto a = direction_in_xz_deg(0);
    auto b = direction_in_xz_deg(70);
    ElasticSpec e{0.6, 0};
    constexpr double n = 400'000;
    auto lf = run_pair_trials(a, b, e, {400'000, 1, 1, PairModel::rod});
    auto rf = run_pair_trials(a, b, e, {400'000, 2, 1, PairModel::rod_right_first});
    for (int i = 0; i < 2; ++i)
    {
        for (int j = 0; j < 2; ++j)
        {
            double p = lf.counts[i][j] / n, q = rf.counts[i][j] / n;
            double sd = std::sqrt(2 * p * (1 - p) / n);
            CHECK(std::abs(p - q) <= 4 * sd + 1e-12);
        }
    }
}

TEST_CASE("no signalling: right marginal does not depend on the left setting")
{
    auto b = direction_in_xz_deg(20);
    ElasticSpec e{0.5, 0};
    for (double adeg : {0.0, 45.0, 110.0})
    {
        auto c = run_pair_trials(direction_in_xz_deg(adeg), b, e,
                                 {200'000, 9, 1, PairModel::rod});
        CHECK(std::abs(c.right_frequency_o1() - 0.5) < 4 * std::sqrt(0.25 / 2e5));
    }
}

TEST_CASE("pair trials are independent of the worker count")
{
    auto a = direction_in_xz_deg(0);
    auto b = direction_in_xz_deg(33);
    for (auto m : {PairModel::rod, PairModel::rod_right_first, PairModel::severed})
    {
        auto base = run_pair_trials(a, b, ElasticSpec{0.7, 0}, {70'001, 6, 1, m});
        CHECK(run_pair_trials(a, b, ElasticSpec{0.7, 0}, {70'001, 6, 4, m}) == base);
    }
}

TEST_CASE("CHSH values")
{
    // standard quantum-optimal placement
    auto s1 = chsh_setting_deg(0, 90, 225, 135);
    CHECK(chsh_analytic(s1, ElasticSpec{1, 0}) == doctest::Approx(sqrt2x2).epsilon(1e-14));
    CHECK(chsh_analytic(s1, ElasticSpec{0, 0}) == 4.0);

    // a = a', b = b' collapses to 2 E(a, b)
    auto s2 = chsh_setting_deg(10, 10, 80, 80);
    double e = correlation_analytic(s2.a, s2.b, ElasticSpec{0.5, 0});
    CHECK(chsh_analytic(s2, ElasticSpec{0.5, 0}) == doctest::Approx(2 * e));

    CHECK(chsh_combination(1, 1, 1, -1) == 4);
    CHECK(chsh_max_placement(-1, 1, 1, 1) == 4);

    CHECK_THROWS_AS(chsh_monte_carlo(s1, ElasticSpec{1, 0}, {0, 1, 1, PairModel::rod}),
                    ValidationError);
    auto mc = chsh_monte_carlo(s1, ElasticSpec{1, 0}, {200'000, 1, 1, PairModel::rod});
    CHECK(std::abs(mc.s - sqrt2x2) <= 4 * mc.std_error);
}

TEST_CASE("CHSH optimizer")
{
    auto q = chsh_optimize_coplanar(ElasticSpec{1, 0});
    CHECK(std::abs(q.max_abs_s - sqrt2x2) < 1e-9);
    auto s = chsh_setting_deg(q.a_deg, q.a_prime_deg, q.b_deg, q.b_prime_deg);
    CHECK(chsh_analytic(s, ElasticSpec{1, 0}) == doctest::Approx(q.max_abs_s).epsilon(1e-9));

    CHECK(chsh_optimize_coplanar(ElasticSpec{0, 0}).max_abs_s == 4.0);
    // four is reachable whenever eps <= 1/sqrt(2)
    CHECK(chsh_optimize_coplanar(ElasticSpec{0.5, 0}).max_abs_s == doctest::Approx(4.0));

    double sphere = chsh_optimize_sphere(ElasticSpec{1, 0}, 8, 3);
    CHECK(std::abs(sphere - q.max_abs_s) < 1e-6);
}

TEST_CASE("CHSH sweep")
{
    auto rows = chsh_sweep({0.0, 0.5, 0.75, 1.0}, 5.0);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].optimum.max_abs_s == doctest::Approx(4.0));
    CHECK(rows[1].optimum.max_abs_s == doctest::Approx(4.0));
    CHECK(rows[2].optimum.max_abs_s < 4.0 - 1e-3);
    CHECK(rows[2].optimum.max_abs_s > sqrt2x2 + 1e-3);
    CHECK(rows[3].optimum.max_abs_s == doctest::Approx(sqrt2x2).epsilon(1e-9));
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i].optimum.max_abs_s <= rows[i - 1].optimum.max_abs_s + 1e-12);

    CHECK_THROWS_AS(chsh_sweep({}), ValidationError);
    CHECK_THROWS_AS(chsh_sweep({1.5}), ValidationError);
    CHECK_THROWS_AS(chsh_sweep({-0.1}), ValidationError);
}

TEST_CASE("severed rod stays within the classical bound")
{
    auto s = chsh_setting_deg(0, 90, 225, 135);
    auto mc = chsh_monte_carlo(s, ElasticSpec{1, 0}, {200'000, 5, 1, PairModel::severed});
    CHECK(std::abs(mc.s) <= 2 + 4 * mc.std_error);
}
