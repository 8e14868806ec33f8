#include "hmsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hmsim/error.hpp"

namespace hmsim
{
Direction::Direction(double x, double y, double z)
{
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
    {
        throw ValidationError("direction components must be finite");
    }
    double const norm = std::hypot(x, y, z);
    if (norm < min_norm || norm > max_norm)
    {
        throw ValidationError("direction magnitude " + std::to_string(norm)
                              + " outside [1e-9, 1e9]");
    }
    v_ = {x / norm, y / norm, z / norm};
}

Direction Direction::from_spherical(double theta, double phi)
{
    double const s = std::sin(theta);
    return Direction(std::cos(phi) * s, std::sin(phi) * s, std::cos(theta));
}

double Direction::theta() const
{
    return std::atan2(std::hypot(v_[0], v_[1]), v_[2]);
}

double Direction::phi() const
{
    if (std::hypot(v_[0], v_[1]) <= 1e-12)
    {
        return 0;
    }
    double p = std::atan2(v_[1], v_[0]);
    if (p < 0)
    {
        p += 2 * std::numbers::pi;
    }
    return p;
}

Direction Direction::operator-() const
{
    Direction result;
    result.v_ = {-v_[0], -v_[1], -v_[2]};
    return result;
}

bool Direction::approx_equal(Direction const& other, double tol) const
{
    for (int i = 0; i < 3; ++i)
    {
        if (std::fabs(v_[i] - other.v_[i]) > tol)
        {
            return false;
        }
    }
    return true;
}

bool ElasticSpec::is_valid(double epsilon, double d)
{
    if (!std::isfinite(epsilon) || !std::isfinite(d))
    {
        return false;
    }
    return epsilon >= 0 && epsilon <= 1 && d >= -1 + epsilon && d <= 1 - epsilon;
}

ElasticSpec::ElasticSpec(double epsilon, double d) : epsilon_{epsilon}, d_{d}
{
    if (!is_valid(epsilon, d))
    {
        throw ValidationError("invalid elastic: need 0 <= epsilon <= 1 and "
                              "-1 + epsilon <= d <= 1 - epsilon (got epsilon="
                              + std::to_string(epsilon) + ", d=" + std::to_string(d) + ")");
    }
}

double axis_coordinate(Direction const& v, Direction const& u)
{
    double const t = v.x() * u.x() + v.y() * u.y() + v.z() * u.z();
    return std::clamp(t, -1.0, 1.0);
}

double angle_between(Direction const& v, Direction const& u)
{
    double const cx = v.y() * u.z() - v.z() * u.y();
    double const cy = v.z() * u.x() - v.x() * u.z();
    double const cz = v.x() * u.y() - v.y() * u.x();
    double const dot = v.x() * u.x() + v.y() * u.y() + v.z() * u.z();
    return std::atan2(std::hypot(cx, cy, cz), dot);
}

Direction direction_in_xz_deg(double theta_deg)
{
    double const rad = theta_deg * std::numbers::pi / 180;
    return Direction(std::sin(rad), 0, std::cos(rad));
}

Direction direction_with_axis_coordinate(double t)
{
    if (!(t >= -1 && t <= 1))
    {
        throw ValidationError("axis coordinate must lie in [-1, 1]");
    }
    return Direction(std::sqrt((1 - t) * (1 + t)), 0, t);
}

}  // namespace hmsim
