#include "hmsim/climit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hmsim/error.hpp"
#include "hmsim/format.hpp"
#include "hmsim/kernels.hpp"

namespace hmsim
{
namespace
{
void check_epsilon(double epsilon)
{
    if (!(epsilon > 0 && epsilon <= 1))
    {
        throw ValidationError("epsilon must lie in (0, 1], got " + format_real(epsilon));
    }
}

void check_spacing(double x0, double dx)
{
    if (!std::isfinite(x0) || !std::isfinite(dx) || !(dx > 0))
    {
        throw ValidationError("grid origin must be finite and spacing positive");
    }
}

double raw_mass(double dx, std::vector<double> const& values)
{
    return dx * kernels::cut_stats(values, 0.0).excess;
}

void check_values(std::vector<double> const& values)
{
    if (values.size() < 3)
    {
        throw ValidationError("density grid needs at least 3 points");
    }
    for (double v : values)
    {
        if (!std::isfinite(v) || v < 0)
        {
            throw ValidationError("density values must be finite and nonnegative");
        }
    }
}
}  // namespace

//---------------------------------------------------------------------------//
// DensityGrid
//---------------------------------------------------------------------------//
DensityGrid::DensityGrid(double x0, double dx, std::vector<double> values)
    : x0_{x0}, dx_{dx}, values_{std::move(values)}
{
    check_spacing(x0_, dx_);
    check_values(values_);
    double const m = raw_mass(dx_, values_);
    if (std::fabs(m - 1) > mass_tolerance)
    {
        throw ValidationError("density mass " + format_real(m) + " differs from 1 by more than 1e-9");
    }
}

DensityGrid::Normalized DensityGrid::normalize(double x0, double dx, std::vector<double> values)
{
    check_spacing(x0, dx);
    check_values(values);
    double const m = raw_mass(dx, values);
    if (!(m > 0) || !std::isfinite(m))
    {
        throw ValidationError("density has zero or non-finite total mass");
    }
    for (double& v : values)
        v /= m;
    return {DensityGrid(x0, dx, std::move(values)), std::fabs(m - 1)};
}

DensityGrid::Normalized DensityGrid::from_amplitudes(double x0,
                                                     double dx,
                                                     std::vector<std::complex<double>> const& psi)
{
    std::vector<double> phi;
    phi.reserve(psi.size());
    for (auto const& a : psi)
    {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw ValidationError("amplitudes must be finite");
        phi.push_back(std::norm(a));
    }
    return normalize(x0, dx, std::move(phi));
}

double DensityGrid::mass() const
{
    return raw_mass(dx_, values_);
}

double DensityGrid::max_value() const
{
    return *std::max_element(values_.begin(), values_.end());
}

//---------------------------------------------------------------------------//
// Threshold and transform
//---------------------------------------------------------------------------//
double cut_mass(DensityGrid const& phi, double c)
{
    return phi.dx() * kernels::cut_stats(phi.values(), c).excess;
}

double threshold_for_mass(DensityGrid const& phi, double epsilon)
{
    check_epsilon(epsilon);
    if (epsilon == 1)
    {
        return 0;
    }
    double const total = cut_mass(phi, 0);
    if (epsilon > total + DensityGrid::mass_tolerance)
    {
        throw ValidationError("epsilon exceeds the total mass of the density");
    }
    if (epsilon >= total)
    {
        return 0;
    }

    // mass(lo) >= epsilon > mass(hi); shrink until no sample lies in (lo, hi]
    double lo = 0;
    double hi = phi.max_value();
    auto active_lo = kernels::cut_stats(phi.values(), lo);
    auto active_hi = kernels::cut_stats(phi.values(), hi);
    for (int iter = 0; iter < 256 && active_lo.active != active_hi.active; ++iter)
    {
        double const mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        auto const stats = kernels::cut_stats(phi.values(), mid);
        if (phi.dx() * stats.excess >= epsilon)
        {
            lo = mid;
            active_lo = stats;
        }
        else
        {
            hi = mid;
            active_hi = stats;
        }
    }

    // On [lo, hi] the active set is fixed: dx * (sum - k c) = epsilon
    double const k = static_cast<double>(active_lo.active);
    double const c = (active_lo.active_sum - epsilon / phi.dx()) / k;
    return std::clamp(c, lo, hi);
}

CutReport epsilon_transform(DensityGrid const& phi, double epsilon)
{
    double const c = threshold_for_mass(phi, epsilon);
    std::vector<double> out(phi.size());
    auto const& in = phi.values();
    for (std::size_t i = 0; i < in.size(); ++i)
    {
        out[i] = in[i] > c ? (in[i] - c) / epsilon : 0.0;
    }
    DensityGrid transformed(phi.x0(), phi.dx(), std::move(out));
    auto support = support_intervals(transformed);
    return {epsilon, c, std::move(transformed), std::move(support)};
}

std::vector<IndexRange> support_intervals(DensityGrid const& phi)
{
    std::vector<IndexRange> result;
    auto const& v = phi.values();
    std::size_t i = 0;
    while (i < v.size())
    {
        if (v[i] > 0)
        {
            std::size_t j = i;
            while (j + 1 < v.size() && v[j + 1] > 0)
                ++j;
            result.push_back({i, j});
            i = j + 1;
        }
        else
        {
            ++i;
        }
    }
    return result;
}

Localization localization(DensityGrid const& phi)
{
    auto const& v = phi.values();
    double const gmax = phi.max_value();
    double const tol = 1e-12 * std::max(1.0, gmax);

    Localization loc;
    std::size_t positive = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        bool const left_ok = i == 0 || v[i] >= v[i - 1];
        bool const right_ok = i + 1 == v.size() || v[i] >= v[i + 1];
        if (left_ok && right_ok && v[i] >= gmax - tol)
            loc.modes.push_back(phi.x_at(i));
        if (v[i] > 0)
            ++positive;
        loc.mean += phi.x_at(i) * v[i];
    }
    loc.mean *= phi.dx();
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        double const r = phi.x_at(i) - loc.mean;
        loc.variance += r * r * v[i];
    }
    loc.variance *= phi.dx();
    loc.support_width = static_cast<double>(positive) * phi.dx();
    return loc;
}

double region_mass(DensityGrid const& phi, double lo, double hi)
{
    if (!(lo < hi))
    {
        throw ValidationError("region must satisfy x_lo < x_hi");
    }
    double total = 0;
    double const half = 0.5 * phi.dx();
    auto const& v = phi.values();
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        double const x = phi.x_at(i);
        double const overlap = std::min(hi, x + half) - std::max(lo, x - half);
        if (overlap > 0)
            total += v[i] * overlap;
    }
    return total;
}

//---------------------------------------------------------------------------//
// Fixtures
//---------------------------------------------------------------------------//
DensityGrid gaussian_fixture(std::size_t points, double center, double sigma)
{
    if (points < 3 || !(sigma > 0))
    {
        throw ValidationError("gaussian fixture needs >= 3 points and sigma > 0");
    }
    double const dx = 2.0 / static_cast<double>(points - 1);
    std::vector<double> values(points);
    for (std::size_t i = 0; i < points; ++i)
    {
        double const z = (-1 + static_cast<double>(i) * dx - center) / sigma;
        values[i] = std::exp(-0.5 * z * z);
    }
    return DensityGrid::normalize(-1, dx, std::move(values)).grid;
}

DensityGrid double_slit_fixture(double ratio, std::size_t points)
{
    if (!(ratio >= 1) || !std::isfinite(ratio))
    {
        throw ValidationError("peak ratio must be finite and >= 1");
    }
    if (points < 3)
    {
        throw ValidationError("double-slit fixture needs >= 3 points");
    }
    constexpr double center = -0.5;
    constexpr double half_width = 0.3;
    double const dx = 2.0 / static_cast<double>(points - 1);

    std::vector<double> left(points);
    for (std::size_t i = 0; i < points; ++i)
    {
        double const z = std::fabs(-1 + static_cast<double>(i) * dx - center) / half_width;
        double const c = std::cos(0.5 * std::numbers::pi * z);
        left[i] = z < 1 ? c * c : 0.0;
    }
    std::vector<double> values(points);
    for (std::size_t i = 0; i < points; ++i)
    {
        values[i] = left[i] + ratio * left[points - 1 - i];
    }
    return DensityGrid::normalize(-1, dx, std::move(values)).grid;
}

DoubleSlitReport double_slit_scenario(double ratio, std::vector<double> const& epsilons)
{
    for (double eps : epsilons)
        check_epsilon(eps);
    DensityGrid const grid = double_slit_fixture(ratio);
    auto const& v = grid.values();
    std::size_t const mid = v.size() / 2;
    double const left_peak = *std::max_element(v.begin(), v.begin() + static_cast<long>(mid));
    double const right_peak = *std::max_element(v.begin() + static_cast<long>(mid) + 1, v.end());

    DoubleSlitReport report;
    report.ratio = ratio;
    report.epsilon_star = cut_mass(grid, std::min(left_peak, right_peak));
    for (double eps : epsilons)
    {
        auto const cut = epsilon_transform(grid, eps);
        DoubleSlitRow row{eps, cut.threshold, {}};
        auto const& tv = cut.transformed.values();
        for (auto const& r : cut.support)
        {
            auto const first = tv.begin() + static_cast<long>(r.first);
            auto const last = tv.begin() + static_cast<long>(r.last) + 1;
            auto const peak = static_cast<std::size_t>(std::max_element(first, last) - tv.begin());
            double mass = 0;
            for (auto it = first; it != last; ++it)
                mass += *it;
            row.clusters.push_back({r, grid.x_at(peak), mass * grid.dx()});
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

//---------------------------------------------------------------------------//
// CSV
//---------------------------------------------------------------------------//
namespace
{
bool parse_double(std::string_view text, double& out)
{
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
        text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    if (text.empty())
        return false;
    auto const res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc{} && res.ptr == text.data() + text.size();
}

std::vector<std::string_view> split_commas(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true)
    {
        auto const pos = line.find(',', start);
        fields.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return fields;
}
}  // namespace

DensityFile parse_density_csv(std::istream& in)
{
    std::vector<double> xs;
    std::vector<double> phi;
    std::vector<std::complex<double>> psi;
    std::size_t columns = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.empty() || line == "\r")
            continue;
        auto const fields = split_commas(line);
        std::vector<double> nums(fields.size());
        bool numeric = true;
        for (std::size_t i = 0; i < fields.size(); ++i)
            numeric = numeric && parse_double(fields[i], nums[i]);
        if (!numeric)
        {
            if (xs.empty() && columns == 0)
            {
                columns = fields.size();  // header
                continue;
            }
            throw ValidationError("density CSV line " + std::to_string(line_no)
                                  + " is not numeric");
        }
        if (nums.size() != 2 && nums.size() != 3)
        {
            throw ValidationError("density CSV needs 2 (x, phi) or 3 (x, re, im) columns");
        }
        if (xs.empty())
            columns = nums.size();
        else if (nums.size() != columns)
            throw ValidationError("density CSV line " + std::to_string(line_no)
                                  + " has an inconsistent column count");
        xs.push_back(nums[0]);
        if (columns == 2)
            phi.push_back(nums[1]);
        else
            psi.emplace_back(nums[1], nums[2]);
    }

    if (xs.size() < 3)
    {
        throw ValidationError("density CSV needs at least 3 rows");
    }
    double const dx = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    if (!(dx > 0))
    {
        throw ValidationError("density CSV x values must be increasing");
    }
    for (std::size_t i = 1; i < xs.size(); ++i)
    {
        if (std::fabs((xs[i] - xs[i - 1]) - dx) > 1e-9 * dx)
        {
            throw ValidationError("density CSV spacing is not uniform at row "
                                  + std::to_string(i));
        }
    }

    auto normalized = columns == 2 ? DensityGrid::normalize(xs.front(), dx, std::move(phi))
                                   : DensityGrid::from_amplitudes(xs.front(), dx, psi);
    DensityFile file{std::move(normalized.grid), normalized.correction, {}};
    if (file.correction > 1e-6)
    {
        file.warnings.push_back("input mass differed from 1 by " + format_real(file.correction)
                                + "; renormalized");
    }
    return file;
}

DensityFile read_density_csv(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw IoError("cannot open density file '" + path + "'");
    }
    return parse_density_csv(in);
}

void write_density_csv(DensityGrid const& grid, std::ostream& out)
{
    out << "x,value\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        out << format_real(grid.x_at(i)) << ',' << format_real(grid.values()[i]) << '\n';
    }
}

}  // namespace hmsim
