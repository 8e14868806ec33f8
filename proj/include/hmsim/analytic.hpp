#pragma once

#include <array>
#include <complex>

#include "hmsim/geometry.hpp"

namespace hmsim
{
// Outcome probabilities; p1 for O1 (towards u), p2 for O2 (towards -u)
struct ProbabilityPair
{
    double p1{0};
    double p2{0};
};

using Complex = std::complex<double>;

//! Normalized two-component state vector.
struct Spinor
{
    Complex a;
    Complex b;

    double norm_sq() const { return std::norm(a) + std::norm(b); }
};

//! 2x2 complex matrix, row-major.
struct SpinOperator
{
    std::array<Complex, 4> m;

    Complex operator()(int row, int col) const { return m[2 * row + col]; }
    Spinor apply(Spinor const& s) const;
    bool is_hermitian(double tol = 1e-12) const;
    // Ascending closed-form eigenvalues of a Hermitian 2x2 matrix
    std::array<double, 2> eigenvalues() const;
};

// Quantum machine: p1 = (1 + t)/2, p2 = (1 - t)/2 with t = v.u
ProbabilityPair quantum_probabilities(Direction const& v, Direction const& u);

//---------------------------------------------------------------------------//
/*!
 * Outcome probabilities of the epsilon,d elastic as a function of the axis
 * coordinate t.
 *
 * t <= d - eps pulls the particle to -u, t >= d + eps pulls it to u, and in
 * between p1 = (t - d + eps) / (2 eps). The closed boundaries belong to the
 * uniform branch when eps > 0 (the formula is continuous there). For eps = 0
 * the tie t == d returns (1/2, 1/2).
 */
ProbabilityPair epsilon_probabilities_at(double t, ElasticSpec const& e);
ProbabilityPair
epsilon_probabilities(Direction const& v, Direction const& u, ElasticSpec const& e);

// E = p1 - p2 = clamp((t - d)/eps, -1, 1); sign(t - d) when eps = 0
double expectation_at(double t, ElasticSpec const& e);
double expectation(Direction const& v, Direction const& u, ElasticSpec const& e);

// (exp(-i phi/2) cos(theta/2), exp(i phi/2) sin(theta/2))
Spinor spinor_from_direction(Direction const& v);

// Hermitian traceless spin operator along u, eigenvalues +-1/2
SpinOperator spin_operator(Direction const& u);

// p1 = |<psi_u, psi>|^2, p2 = |<psi_-u, psi>|^2
ProbabilityPair born_probabilities(Spinor const& state, Direction const& u);

/*!
 * Maximum deviation of t -> expectation(t) from its least-squares affine fit
 * on an even grid of \c samples points spanning t in [-1, 1].
 *
 * Zero (to rounding) iff the map is affine on the grid, which for d = 0
 * happens only at eps = 1.
 */
double linearity_deviation(ElasticSpec const& e, int samples);

}  // namespace hmsim
