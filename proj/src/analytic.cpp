#include "hmsim/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hmsim/error.hpp"

namespace hmsim
{
Spinor SpinOperator::apply(Spinor const& s) const
{
    return {m[0] * s.a + m[1] * s.b, m[2] * s.a + m[3] * s.b};
}

bool SpinOperator::is_hermitian(double tol) const
{
    return std::abs(m[0].imag()) <= tol && std::abs(m[3].imag()) <= tol
           && std::abs(m[1] - std::conj(m[2])) <= tol;
}

std::array<double, 2> SpinOperator::eigenvalues() const
{
    double const half_trace = 0.5 * (m[0].real() + m[3].real());
    double const half_diff = 0.5 * (m[0].real() - m[3].real());
    double const r = std::hypot(half_diff, std::abs(m[1]));
    return {half_trace - r, half_trace + r};
}

ProbabilityPair quantum_probabilities(Direction const& v, Direction const& u)
{
    double const t = axis_coordinate(v, u);
    return {(1 + t) / 2, (1 - t) / 2};
}

ProbabilityPair epsilon_probabilities_at(double t, ElasticSpec const& e)
{
    double const eps = e.epsilon();
    if (eps == 0)
    {
        if (t < e.d())
            return {0, 1};
        if (t > e.d())
            return {1, 0};
        return {0.5, 0.5};
    }
    if (t < e.lower())
        return {0, 1};
    if (t > e.upper())
        return {1, 0};
    double const p1 = (t - e.d() + eps) / (2 * eps);
    double const p2 = (e.d() + eps - t) / (2 * eps);
    return {p1, p2};
}

ProbabilityPair
epsilon_probabilities(Direction const& v, Direction const& u, ElasticSpec const& e)
{
    return epsilon_probabilities_at(axis_coordinate(v, u), e);
}

double expectation_at(double t, ElasticSpec const& e)
{
    auto const p = epsilon_probabilities_at(t, e);
    return p.p1 - p.p2;
}

double expectation(Direction const& v, Direction const& u, ElasticSpec const& e)
{
    return expectation_at(axis_coordinate(v, u), e);
}

Spinor spinor_from_direction(Direction const& v)
{
    double const theta = v.theta();
    double const phi = v.phi();
    Complex const lower_phase = std::polar(1.0, -phi / 2);
    Complex const upper_phase = std::polar(1.0, phi / 2);
    return {lower_phase * std::cos(theta / 2), upper_phase * std::sin(theta / 2)};
}

SpinOperator spin_operator(Direction const& u)
{
    double const alpha = u.theta();
    double const beta = u.phi();
    double const c = std::cos(alpha);
    double const s = std::sin(alpha);
    return {{Complex{c / 2, 0},
             std::polar(s / 2, -beta),
             std::polar(s / 2, beta),
             Complex{-c / 2, 0}}};
}

namespace
{
double overlap_sq(Spinor const& lhs, Spinor const& rhs)
{
    return std::norm(std::conj(lhs.a) * rhs.a + std::conj(lhs.b) * rhs.b);
}
}  // namespace

ProbabilityPair born_probabilities(Spinor const& state, Direction const& u)
{
    return {overlap_sq(spinor_from_direction(u), state),
            overlap_sq(spinor_from_direction(-u), state)};
}

double linearity_deviation(ElasticSpec const& e, int samples)
{
    if (samples < 3)
    {
        throw ValidationError("linearity_deviation needs at least 3 samples");
    }
    std::vector<double> ts(samples);
    std::vector<double> ys(samples);
    double mean_t = 0;
    double mean_y = 0;
    for (int k = 0; k < samples; ++k)
    {
        ts[k] = -1 + 2 * static_cast<double>(k) / (samples - 1);
        ys[k] = expectation_at(ts[k], e);
        mean_t += ts[k];
        mean_y += ys[k];
    }
    mean_t /= samples;
    mean_y /= samples;

    double sxx = 0;
    double sxy = 0;
    for (int k = 0; k < samples; ++k)
    {
        sxx += (ts[k] - mean_t) * (ts[k] - mean_t);
        sxy += (ts[k] - mean_t) * (ys[k] - mean_y);
    }
    double const slope = sxy / sxx;
    double const intercept = mean_y - slope * mean_t;

    double worst = 0;
    for (int k = 0; k < samples; ++k)
    {
        worst = std::max(worst, std::fabs(ys[k] - (intercept + slope * ts[k])));
    }
    return worst;
}

}  // namespace hmsim
