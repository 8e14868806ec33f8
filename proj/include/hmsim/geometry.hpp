#pragma once

#include <array>

namespace hmsim
{
//---------------------------------------------------------------------------//
/*!
 * Unit vector on the 2-sphere.
 *
 * Construction normalizes the input; vectors whose magnitude lies outside
 * [1e-9, 1e9] are rejected rather than silently rescaled.
 */
class Direction
{
  public:
    static constexpr double min_norm = 1e-9;
    static constexpr double max_norm = 1e9;

    // Defaults to +z
    constexpr Direction() = default;
    Direction(double x, double y, double z);

    // Polar angle theta in [0, pi], azimuth phi (radians)
    static Direction from_spherical(double theta, double phi);

    double x() const { return v_[0]; }
    double y() const { return v_[1]; }
    double z() const { return v_[2]; }
    std::array<double, 3> const& components() const { return v_; }

    double theta() const;
    // Returns 0 when sin(theta) <= 1e-12
    double phi() const;

    Direction operator-() const;

    bool approx_equal(Direction const& other, double tol = 1e-12) const;

  private:
    std::array<double, 3> v_{0, 0, 1};
};

// Particle state on the sphere surface
struct SphereState
{
    Direction position;

    bool approx_equal(SphereState const& other, double tol = 1e-12) const
    {
        return position.approx_equal(other.position, tol);
    }
};

//---------------------------------------------------------------------------//
/*!
 * Breakable-segment description of an elastic.
 *
 * The elastic spans axis coordinates t in [-1, 1]; it breaks uniformly on
 * [d - epsilon, d + epsilon] and nowhere else.
 */
class ElasticSpec
{
  public:
    // Quantum machine: epsilon = 1, d = 0
    constexpr ElasticSpec() = default;
    ElasticSpec(double epsilon, double d);

    double epsilon() const { return epsilon_; }
    double d() const { return d_; }
    double lower() const { return d_ - epsilon_; }
    double upper() const { return d_ + epsilon_; }

    static bool is_valid(double epsilon, double d);

  private:
    double epsilon_{1};
    double d_{0};
};

enum class Outcome
{
    O1,  //!< arrives at u
    O2,  //!< arrives at -u
};

// Projection coordinate t = v.u, clamped to [-1, 1]
double axis_coordinate(Direction const& v, Direction const& u);

// Angle in [0, pi]; uses atan2 so it stays accurate near 0 and pi
double angle_between(Direction const& v, Direction const& u);

// Direction in the x-z plane at the given polar angle (degrees)
Direction direction_in_xz_deg(double theta_deg);

// Direction with axis coordinate t relative to +z
Direction direction_with_axis_coordinate(double t);

}  // namespace hmsim
