#include "hmsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hmsim/analytic.hpp"
#include "hmsim/climit.hpp"
#include "hmsim/epr.hpp"
#include "hmsim/error.hpp"
#include "hmsim/format.hpp"
#include "hmsim/kernels.hpp"
#include "hmsim/sampler.hpp"
#include "hmsim/stats.hpp"

namespace hmsim
{
namespace
{
constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

// Writes one spin-schema row; returns true when the row is flagged
bool spin_row(std::ostringstream& out,
              double theta_deg,
              ElasticSpec const& e,
              ExperimentConfig const& c)
{
    Direction const u;
    Direction const v = direction_in_xz_deg(theta_deg);
    auto const table = run_trials(v, u, e, {c.n, c.seed, c.workers});
    auto const analytic = epsilon_probabilities(v, u, e);
    auto const stats = chi_square(table, analytic);
    double const freq = table.frequency(Outcome::O1);

    out << format_real(theta_deg) << ',' << format_real(e.epsilon()) << ','
        << format_real(e.d()) << ',' << c.n << ',' << c.seed << ',' << format_real(freq) << ','
        << format_real(analytic.p1) << ',' << format_real(stats.outcomes[0].std_error) << ','
        << format_real(stats.chi2) << '\n';

    return sigma_deviation(freq, analytic.p1, c.n) > flag_sigma || !stats.consistent;
}

std::string spin_label(double theta_deg, ElasticSpec const& e)
{
    return "theta_deg=" + format_real(theta_deg) + " epsilon=" + format_real(e.epsilon())
           + " d=" + format_real(e.d());
}

nlohmann::json ranges_json(DensityGrid const& grid, std::vector<IndexRange> const& ranges)
{
    nlohmann::json arr = nlohmann::json::array();
    for (auto const& r : ranges)
    {
        arr.push_back({{"first", r.first},
                       {"last", r.last},
                       {"x_low", grid.x_at(r.first)},
                       {"x_high", grid.x_at(r.last)}});
    }
    return arr;
}

// Shortest round-trip representation; bit-stable like the CSV output
std::string dump(nlohmann::json const& j)
{
    return j.dump(2) + "\n";
}
}  // namespace

RunResult run_spin(ExperimentConfig const& c)
{
    ElasticSpec const e(c.epsilon, c.d);
    RunResult result;
    std::ostringstream out;
    out << spin_csv_header << '\n';
    if (spin_row(out, c.theta_deg, e, c))
        result.flagged.push_back(spin_label(c.theta_deg, e));
    result.output = out.str();
    return result;
}

RunResult run_sweep(ExperimentConfig const& c)
{
    RunResult result;
    std::ostringstream out;
    out << spin_csv_header << '\n';
    for (double theta : c.thetas_deg)
    {
        for (double eps : c.epsilons)
        {
            for (double d : c.ds)
            {
                if (!ElasticSpec::is_valid(eps, d))
                {
                    result.notes.push_back("skipped epsilon=" + format_real(eps) + " d="
                                           + format_real(d) + " (d outside [-1+eps, 1-eps])");
                    continue;
                }
                ElasticSpec const e(eps, d);
                if (spin_row(out, theta, e, c))
                    result.flagged.push_back(spin_label(theta, e));
            }
        }
    }
    result.output = out.str();
    return result;
}

RunResult run_chsh(ExperimentConfig const& c)
{
    RunResult result;
    std::ostringstream out;
    out << chsh_csv_header << '\n';
    for (std::size_t k = 0; k < c.epsilons.size(); ++k)
    {
        double const eps = c.epsilons[k];
        ElasticSpec const e(eps, 0);
        std::array<double, 4> angles;
        if (c.angles_deg)
        {
            std::copy_n(c.angles_deg->begin(), 4, angles.begin());
        }
        else
        {
            auto const opt = chsh_optimize_coplanar(e, c.resolution_deg);
            angles = {opt.a_deg, opt.a_prime_deg, opt.b_deg, opt.b_prime_deg};
        }
        ChshSetting const setting = chsh_setting_deg(angles[0], angles[1], angles[2], angles[3]);
        double const s_analytic = chsh_analytic(setting, e);
        double s_mc = nan_value;
        double se = nan_value;
        if (c.chsh_mode == ChshMode::monte_carlo)
        {
            auto const est = chsh_monte_carlo(
                setting, e, {c.n, derive_seed(c.seed, k), c.workers, PairModel::rod});
            s_mc = est.s;
            se = est.std_error;
            double const diff = std::fabs(s_mc - s_analytic);
            if (se > 0 ? diff > flag_sigma * se : diff != 0)
                result.flagged.push_back("epsilon=" + format_real(eps));
        }
        out << format_real(eps);
        for (double a : angles)
            out << ',' << format_real(a);
        out << ',' << format_real(s_analytic) << ',' << format_real(s_mc) << ','
            << format_real(se) << '\n';
    }
    result.output = out.str();
    return result;
}

RunResult run_climit(ExperimentConfig const& c)
{
    RunResult result;
    DensityGrid grid = gaussian_fixture();
    std::string source = "gaussian-fixture";
    if (c.input)
    {
        auto file = read_density_csv(*c.input);
        grid = std::move(file.grid);
        source = *c.input;
        result.notes = std::move(file.warnings);
    }

    nlohmann::json report;
    report["source"] = source;
    report["points"] = grid.size();
    report["x0"] = grid.x0();
    report["dx"] = grid.dx();
    auto const original = localization(grid);
    report["original"] = {{"modes", original.modes},
                          {"support_width", original.support_width},
                          {"mean", original.mean},
                          {"variance", original.variance}};

    std::vector<CutReport> cuts;
    nlohmann::json rows = nlohmann::json::array();
    for (double eps : c.epsilons)
    {
        auto cut = epsilon_transform(grid, eps);
        auto const loc = localization(cut.transformed);
        double const mass = cut.transformed.mass();
        rows.push_back({{"epsilon", eps},
                        {"threshold", cut.threshold},
                        {"cut_mass", cut_mass(grid, cut.threshold)},
                        {"mass", mass},
                        {"mass_error", std::fabs(mass - 1)},
                        {"support_intervals", ranges_json(cut.transformed, cut.support)},
                        {"support_width", loc.support_width},
                        {"modes", loc.modes},
                        {"mean", loc.mean},
                        {"variance", loc.variance}});
        cuts.push_back(std::move(cut));
    }
    report["cuts"] = rows;
    result.output = dump(report);

    std::ostringstream csv;
    csv << "x,original";
    for (double eps : c.epsilons)
        csv << ",epsilon_" << format_real(eps);
    csv << '\n';
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        csv << format_real(grid.x_at(i)) << ',' << format_real(grid.values()[i]);
        for (auto const& cut : cuts)
            csv << ',' << format_real(cut.transformed.values()[i]);
        csv << '\n';
    }
    result.density_csv = csv.str();
    return result;
}

RunResult run_doubleslit(ExperimentConfig const& c)
{
    auto const report = double_slit_scenario(c.ratio, c.epsilons);
    nlohmann::json j;
    j["ratio"] = report.ratio;
    j["epsilon_star"] = report.epsilon_star;
    nlohmann::json rows = nlohmann::json::array();
    for (auto const& row : report.rows)
    {
        nlohmann::json clusters = nlohmann::json::array();
        for (auto const& cl : row.clusters)
        {
            clusters.push_back({{"first", cl.range.first},
                                {"last", cl.range.last},
                                {"peak_x", cl.peak_x},
                                {"mass", cl.mass}});
        }
        rows.push_back({{"epsilon", row.epsilon},
                        {"threshold", row.threshold},
                        {"cluster_count", row.clusters.size()},
                        {"clusters", clusters}});
    }
    j["rows"] = rows;
    RunResult result;
    result.output = dump(j);
    return result;
}

RunResult run_experiment(ExperimentConfig const& config)
{
    validate(config);
    kernels::set_backend(kernels::backend_from_string(config.backend));
    switch (config.kind)
    {
        case ExperimentKind::spin:
            return run_spin(config);
        case ExperimentKind::sweep:
            return run_sweep(config);
        case ExperimentKind::chsh:
            return run_chsh(config);
        case ExperimentKind::climit:
            return run_climit(config);
        case ExperimentKind::doubleslit:
            return run_doubleslit(config);
    }
    throw ValidationError("unknown experiment kind");
}

}  // namespace hmsim
