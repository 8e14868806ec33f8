#include "hmsim/stats.hpp"

#include <cmath>
#include <limits>

#include "hmsim/error.hpp"

namespace hmsim
{
StatReport chi_square(FrequencyTable const& observed, ProbabilityPair const& expected)
{
    std::uint64_t const n = observed.total();
    if (n == 0)
    {
        throw ValidationError("chi-square needs at least one trial");
    }
    StatReport report;
    report.n = n;
    auto const nd = static_cast<double>(n);

    std::array<double, 2> const probs{expected.p1, expected.p2};
    std::array<std::uint64_t, 2> const counts{observed.o1, observed.o2};
    for (std::size_t k = 0; k < 2; ++k)
    {
        double const f = static_cast<double>(counts[k]) / nd;
        double const se = std::sqrt(f * (1 - f) / nd);
        report.outcomes[k] = {f, se, f - z95 * se, f + z95 * se};
    }

    if (probs[0] == 0 || probs[1] == 0)
    {
        report.mode = ChiSquareMode::exact;
        std::size_t const impossible = probs[0] == 0 ? 0 : 1;
        report.consistent = counts[impossible] == 0;
        report.chi2 = report.consistent ? 0.0 : std::numeric_limits<double>::infinity();
        return report;
    }

    double chi2 = 0;
    bool small_cell = false;
    for (std::size_t k = 0; k < 2; ++k)
    {
        double const e = probs[k] * nd;
        small_cell = small_cell || e < 5;
        double const diff = static_cast<double>(counts[k]) - e;
        chi2 += diff * diff / e;
    }
    report.chi2 = chi2;
    if (n < 100 || small_cell)
    {
        report.mode = ChiSquareMode::inapplicable;
        report.chi2 = std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

double sigma_deviation(double frequency, double p, std::uint64_t n)
{
    double const diff = std::fabs(frequency - p);
    double const var = p * (1 - p);
    if (var == 0)
    {
        return diff == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return diff / std::sqrt(var / static_cast<double>(n));
}

}  // namespace hmsim
