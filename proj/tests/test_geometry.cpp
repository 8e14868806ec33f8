#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hmsim/error.hpp"
#include "hmsim/geometry.hpp"

using namespace hmsim;

TEST_CASE("direction normalizes and rejects degenerate input")
{
    Direction v{0, 3, 4};
    CHECK(v.y() == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(v.z() == doctest::Approx(0.8).epsilon(1e-15));

    CHECK_THROWS_AS(Direction(0, 0, 0), ValidationError);
    CHECK_THROWS_AS(Direction(1e-10, 0, 0), ValidationError);
    CHECK_THROWS_AS(Direction(1e10, 0, 0), ValidationError);
    CHECK_THROWS_AS(Direction(std::nan(""), 0, 1), ValidationError);
    CHECK_THROWS_AS(Direction(INFINITY, 0, 1), ValidationError);
    CHECK_NOTHROW(Direction(2e-9, 0, 0));
}

TEST_CASE("spherical round trip")
{
    for (double th : {0.3, 1.0, 2.0, 3.0})
    {
        for (double ph : {-2.0, 0.0, 0.5, 3.0})
        {
            auto v = Direction::from_spherical(th, ph);
            CHECK(v.theta() == doctest::Approx(th).epsilon(1e-13));
            // azimuth is reported in [0, 2 pi)
            double want = ph < 0 ? ph + 2 * std::numbers::pi : ph;
            CHECK(v.phi() == doctest::Approx(want).epsilon(1e-13));
        }
    }
    // poles have no azimuth
    CHECK(Direction(0, 0, 1).phi() == 0.0);
    CHECK(Direction(0, 0, -1).theta() == doctest::Approx(std::numbers::pi));
}

TEST_CASE("axis coordinate and angle")
{
    auto v = Direction::from_spherical(std::numbers::pi / 3, 0);
    Direction u{0, 0, 1};
    CHECK(axis_coordinate(v, u) == doctest::Approx(0.5).epsilon(1e-15));
    // reference from long double arccos
    long double ref = std::acos(0.5L);
    CHECK(std::abs(angle_between(v, u) - static_cast<double>(ref)) < 1e-15);
    CHECK(std::abs(angle_between(v, u) - std::numbers::pi / 3) < 1e-15);

    // atan2 form stays accurate near parallel vectors
    Direction w = Direction::from_spherical(1e-9, 0);
    CHECK(angle_between(w, u) == doctest::Approx(1e-9).epsilon(1e-6));
    CHECK(axis_coordinate(u, u) == 1.0);
    CHECK(axis_coordinate(-u, u) == -1.0);
}

TEST_CASE("antipode")
{
    Direction v{1, 2, -2};
    auto m = -v;
    CHECK(m.approx_equal(Direction{-1, -2, 2}));
    CHECK(axis_coordinate(v, m) == doctest::Approx(-1.0));
}

TEST_CASE("helpers in the xz plane")
{
    auto v = direction_in_xz_deg(90);
    CHECK(v.approx_equal(Direction{1, 0, 0}));
    for (double t : {-1.0, -0.3, 0.0, 0.7, 1.0})
    {
        CHECK(axis_coordinate(direction_with_axis_coordinate(t), Direction{0, 0, 1})
              == doctest::Approx(t).epsilon(1e-14));
    }
}

TEST_CASE("elastic spec validation")
{
    CHECK(ElasticSpec::is_valid(1, 0));
    CHECK(ElasticSpec::is_valid(0, 0));
    CHECK(ElasticSpec::is_valid(0.5, 0.5));
    CHECK_FALSE(ElasticSpec::is_valid(0.5, 0.6));
    CHECK_FALSE(ElasticSpec::is_valid(-0.1, 0));
    CHECK_FALSE(ElasticSpec::is_valid(1.1, 0));
    CHECK_FALSE(ElasticSpec::is_valid(std::nan(""), 0));
    CHECK_THROWS_AS(ElasticSpec(0.5, 0.6), ValidationError);

    ElasticSpec e{0.5, 0.2};
    CHECK(e.lower() == doctest::Approx(-0.3));
    CHECK(e.upper() == doctest::Approx(0.7));
}
