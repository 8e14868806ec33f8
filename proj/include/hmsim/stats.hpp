#pragma once

#include <array>
#include <cstdint>

#include "hmsim/analytic.hpp"
#include "hmsim/sampler.hpp"

namespace hmsim
{
enum class ChiSquareMode
{
    pearson,       //!< ordinary chi-square, df = 1
    exact,         //!< degenerate expectation: every trial must match
    inapplicable,  //!< n < 100 or an expected count below 5
};

struct OutcomeStats
{
    double frequency{0};
    double std_error{0};
    double ci_low{0};
    double ci_high{0};
};

struct StatReport
{
    std::uint64_t n{0};
    std::array<OutcomeStats, 2> outcomes{};  //!< indexed by Outcome
    ChiSquareMode mode{ChiSquareMode::pearson};
    double chi2{0};
    int df{1};
    // False only when the exact check finds a trial contradicting certainty
    bool consistent{true};
};

inline constexpr double z95 = 1.96;

StatReport chi_square(FrequencyTable const& observed, ProbabilityPair const& expected);

// |freq - p| / sqrt(p (1 - p) / n); 0 or +inf for degenerate p
double sigma_deviation(double frequency, double p, std::uint64_t n);

}  // namespace hmsim
