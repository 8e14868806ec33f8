#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "doctest.h"
#include "hmsim/analytic.hpp"
#include "hmsim/error.hpp"
#include "hmsim/random.hpp"

using namespace hmsim;

namespace
{
Direction random_direction(RandomStream& r)
{
    double z = 2 * r.uniform() - 1;
    double ph = 2 * std::numbers::pi * r.uniform();
    double s = std::sqrt(1 - z * z);
    return Direction{s * std::cos(ph), s * std::sin(ph), z};
}

Eigen::Matrix2cd to_eigen(SpinOperator const& h)
{
    Eigen::Matrix2cd m;
    m << h(0, 0), h(0, 1), h(1, 0), h(1, 1);
    return m;
}

Eigen::Vector2cd to_eigen(Spinor const& s)
{
    return Eigen::Vector2cd{s.a, s.b};
}

// Independent clamp model, written from the piecewise definition
double oracle_p1(double t, double eps, double d)
{
    if (eps == 0) return t > d ? 1.0 : (t < d ? 0.0 : 0.5);
    return std::clamp((t - d + eps) / (2 * eps), 0.0, 1.0);
}
}  // namespace

TEST_CASE("quantum probabilities")
{
    auto v = Direction::from_spherical(std::numbers::pi / 3, 0);
    Direction u{0, 0, 1};
    auto p = quantum_probabilities(v, u);
    CHECK(p.p1 == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(p.p2 == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(quantum_probabilities(u, u).p1 == 1.0);
    CHECK(quantum_probabilities(-u, u).p1 == 0.0);
}

TEST_CASE("epsilon model examples")
{
    ElasticSpec e{0.5, 0.2};
    auto p = epsilon_probabilities_at(0.45, e);
    CHECK(p.p1 == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(p.p2 == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(epsilon_probabilities_at(0.8, e).p1 == 1.0);
    CHECK(epsilon_probabilities_at(-0.4, e).p1 == 0.0);

    ElasticSpec sharp{0, 0.1};
    CHECK(epsilon_probabilities_at(0.1, sharp).p1 == 0.5);
    CHECK(epsilon_probabilities_at(0.2, sharp).p1 == 1.0);
    CHECK(epsilon_probabilities_at(0.0, sharp).p1 == 0.0);

    CHECK(expectation_at(0.9, ElasticSpec{0.5, 0}) == 1.0);
    CHECK(expectation_at(0.25, ElasticSpec{0.5, 0}) == doctest::Approx(0.5));
}

TEST_CASE("epsilon model matches the piecewise oracle on a grid")
{
    for (double eps : {0.0, 0.1, 0.5, 0.9, 1.0})
    {
        for (double d : {-0.5, 0.0, 0.3})
        {
            if (!ElasticSpec::is_valid(eps, d)) continue;
            ElasticSpec e{eps, d};
            for (int k = 0; k <= 200; ++k)
            {
                double t = -1 + 0.01 * k;
                auto p = epsilon_probabilities_at(t, e);
                CHECK(p.p1 == doctest::Approx(oracle_p1(t, eps, d)).epsilon(1e-13));
                CHECK(p.p1 + p.p2 == doctest::Approx(1.0).epsilon(1e-15));
            }
        }
    }
}

TEST_CASE("epsilon = 1, d = 0 reproduces the quantum rule")
{
    RandomStream r{3, 0};
    ElasticSpec e{1, 0};
    for (int i = 0; i < 1000; ++i)
    {
        auto v = random_direction(r);
        auto u = random_direction(r);
        CHECK(std::abs(epsilon_probabilities(v, u, e).p1 - quantum_probabilities(v, u).p1)
              < 1e-12);
    }
}

TEST_CASE("spin operator examples")
{
    auto hz = spin_operator(Direction{0, 0, 1});
    CHECK(std::abs(hz(0, 0) - Complex(0.5)) < 1e-15);
    CHECK(std::abs(hz(1, 1) - Complex(-0.5)) < 1e-15);
    CHECK(std::abs(hz(0, 1)) < 1e-15);

    auto hx = spin_operator(Direction{1, 0, 0});
    CHECK(std::abs(hx(0, 0)) < 1e-15);
    CHECK(std::abs(hx(0, 1) - Complex(0.5)) < 1e-15);
    CHECK(std::abs(hx(1, 0) - Complex(0.5)) < 1e-15);
}

TEST_CASE("spin operator against an Eigen eigen-solver")
{
    RandomStream r{11, 0};
    for (int i = 0; i < 200; ++i)
    {
        auto u = random_direction(r);
        auto h = spin_operator(u);
        auto m = to_eigen(h);
        CHECK(h.is_hermitian());
        CHECK((m - m.adjoint()).norm() < 1e-14);
        CHECK(std::abs(m.trace()) < 1e-14);

        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m);
        auto ev = h.eigenvalues();
        std::sort(ev.begin(), ev.end());
        CHECK(std::abs(ev[0] - es.eigenvalues()(0)) < 1e-13);
        CHECK(std::abs(ev[1] - es.eigenvalues()(1)) < 1e-13);
        CHECK(es.eigenvalues()(0) == doctest::Approx(-0.5).epsilon(1e-13));

        // the spinor for u is the +1/2 eigenvector
        auto psi = to_eigen(spinor_from_direction(u));
        CHECK((m * psi - 0.5 * psi).norm() < 1e-13);
        auto applied = to_eigen(h.apply(spinor_from_direction(u)));
        CHECK((applied - m * psi).norm() < 1e-14);
    }
}

TEST_CASE("Born rule matches the sphere picture")
{
    RandomStream r{12, 0};
    for (int i = 0; i < 1000; ++i)
    {
        auto v = random_direction(r);
        auto u = random_direction(r);
        auto psi = spinor_from_direction(v);
        CHECK(psi.norm_sq() == doctest::Approx(1.0).epsilon(1e-14));

        // projector onto the u-spinor, computed with Eigen
        auto pu = to_eigen(spinor_from_direction(u));
        double p1_eigen = std::norm(pu.dot(to_eigen(psi)));

        auto born = born_probabilities(psi, u);
        auto sphere = quantum_probabilities(v, u);
        CHECK(std::abs(born.p1 - sphere.p1) < 1e-12);
        CHECK(std::abs(p1_eigen - sphere.p1) < 1e-12);
        CHECK(born.p1 + born.p2 == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("linearity deviation")
{
    // least-squares affine fit to the oracle expectation, solved by Eigen QR
    auto oracle = [](double eps, int samples) {
        Eigen::MatrixXd a(samples, 2);
        Eigen::VectorXd y(samples);
        for (int k = 0; k < samples; ++k)
        {
            double t = -1 + 2.0 * k / (samples - 1);
            a(k, 0) = 1;
            a(k, 1) = t;
            y(k) = 2 * oracle_p1(t, eps, 0) - 1;  // expectation value
        }
        Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
        return (a * c - y).cwiseAbs().maxCoeff();
    };

    CHECK(linearity_deviation(ElasticSpec{1, 0}, 101) < 1e-12);
    double dev = linearity_deviation(ElasticSpec{0.5, 0}, 101);
    CHECK(dev > 0.01);
    CHECK(dev == doctest::Approx(oracle(0.5, 101)).epsilon(1e-10));
    CHECK(linearity_deviation(ElasticSpec{0, 0}, 101)
          == doctest::Approx(oracle(0, 101)).epsilon(1e-10));
    CHECK_THROWS_AS(linearity_deviation(ElasticSpec{1, 0}, 2), ValidationError);
}
