#pragma once

#include <cstddef>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace hmsim
{
//---------------------------------------------------------------------------//
/*!
 * Nonnegative 1-D probability density sampled on a uniform grid.
 *
 * Point i sits at x0 + i * dx. Mass is the Riemann sum dx * sum(values) and
 * must equal 1 within 1e-9.
 */
class DensityGrid
{
  public:
    static constexpr double mass_tolerance = 1e-9;

    DensityGrid(double x0, double dx, std::vector<double> values);

    struct Normalized;
    // Rescales to unit mass; reports the relative correction applied
    static Normalized normalize(double x0, double dx, std::vector<double> values);
    // phi = |psi|^2, then normalize
    static Normalized from_amplitudes(double x0, double dx,
                                      std::vector<std::complex<double>> const& psi);

    double x0() const { return x0_; }
    double dx() const { return dx_; }
    std::size_t size() const { return values_.size(); }
    std::vector<double> const& values() const { return values_; }
    double x_at(std::size_t i) const { return x0_ + static_cast<double>(i) * dx_; }
    double mass() const;
    double max_value() const;

  private:
    double x0_;
    double dx_;
    std::vector<double> values_;
};

struct DensityGrid::Normalized
{
    DensityGrid grid;
    double correction{0};  //!< |original mass - 1|
};

// Inclusive index range [first, last]
struct IndexRange
{
    std::size_t first{0};
    std::size_t last{0};

    bool operator==(IndexRange const&) const = default;
};

struct CutReport
{
    double epsilon{1};
    double threshold{0};
    DensityGrid transformed;
    std::vector<IndexRange> support;
};

// dx * sum(max(phi_i - c, 0))
double cut_mass(DensityGrid const& phi, double c);

/*!
 * Level c >= 0 whose cap above c has mass epsilon.
 *
 * Brackets on [0, max phi] and bisects; the mass is piecewise linear in c,
 * so the final step solves the active piece exactly. epsilon = 1 cuts the
 * whole density (c = 0).
 */
double threshold_for_mass(DensityGrid const& phi, double epsilon);

// phi_eps(x) = max(phi(x) - c, 0) / eps; the input is left untouched
CutReport epsilon_transform(DensityGrid const& phi, double epsilon);

// Maximal runs of strictly positive values
std::vector<IndexRange> support_intervals(DensityGrid const& phi);

struct Localization
{
    std::vector<double> modes;  //!< local maxima within 1e-12 of the global max
    double support_width{0};
    double mean{0};
    double variance{0};
};

Localization localization(DensityGrid const& phi);

// Integral over [lo, hi] of the piecewise-constant cell reconstruction
double region_mass(DensityGrid const& phi, double lo, double hi);

//---------------------------------------------------------------------------//
// Fixtures and the double-slit scenario
//---------------------------------------------------------------------------//
// Unit-mass Gaussian on [-1, 1]
DensityGrid gaussian_fixture(std::size_t points = 2001, double center = 0.15, double sigma = 0.2);

/*!
 * Two cos^2 humps of half-width 0.3 centered at -0.5 and +0.5 on [-1, 1];
 * the right hump is scaled by \c ratio. With ratio 1 the grid is exactly
 * mirror-symmetric.
 */
DensityGrid double_slit_fixture(double ratio, std::size_t points = 2001);

struct Cluster
{
    IndexRange range;
    double peak_x{0};
    double mass{0};  //!< mass of the transformed density in this cluster
};

struct DoubleSlitRow
{
    double epsilon{0};
    double threshold{0};
    std::vector<Cluster> clusters;
};

struct DoubleSlitReport
{
    double ratio{1};
    // Below this epsilon only the taller hump survives (0 for equal humps)
    double epsilon_star{0};
    std::vector<DoubleSlitRow> rows;
};

DoubleSlitReport double_slit_scenario(double ratio, std::vector<double> const& epsilons);

//---------------------------------------------------------------------------//
// File formats
//---------------------------------------------------------------------------//
struct DensityFile
{
    DensityGrid grid;
    double correction{0};
    std::vector<std::string> warnings;
};

/*!
 * Two-column CSV (x, phi) or three-column (x, Re psi, Im psi). An optional
 * non-numeric header line is skipped. Spacing must be uniform to 1e-9
 * relative to dx.
 */
DensityFile parse_density_csv(std::istream& in);
DensityFile read_density_csv(std::string const& path);
void write_density_csv(DensityGrid const& grid, std::ostream& out);

}  // namespace hmsim
