// Command-line front end: spin | sweep | chsh | climit | doubleslit | selftest
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hmsim/config.hpp"
#include "hmsim/error.hpp"
#include "hmsim/experiments.hpp"
#include "hmsim/selftest.hpp"

namespace
{
enum ExitCode
{
    exit_ok = 0,
    exit_validation = 2,
    exit_runtime = 3,
    exit_io = 4,
};

int report_error(char const* kind, std::string const& message, int code)
{
    nlohmann::json j{{"error", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << j.dump() << std::endl;
    return code;
}

void write_output(std::string const& path, std::string const& text)
{
    if (path == "-")
    {
        std::cout << text;
        std::cout.flush();
        if (!std::cout)
            throw hmsim::IoError("failed writing to standard output");
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw hmsim::IoError("cannot open output file '" + path + "'");
    out << text;
    if (!out)
        throw hmsim::IoError("failed writing output file '" + path + "'");
}

// Flags that were given on the command line override config-file fields
struct Overrides
{
    std::string config_path;
    double theta_deg{};
    double epsilon{};
    double d{};
    std::vector<double> thetas_deg;
    std::vector<double> epsilons;
    std::vector<double> ds;
    std::vector<double> angles_deg;
    std::string chsh_mode;
    double resolution_deg{};
    std::string input;
    std::string density_output;
    double ratio{};
    std::uint64_t n{};
    std::uint64_t seed{};
    unsigned workers{};
    std::string output;
    std::string backend;
    bool optimize{false};
    bool dump_config{false};
};

void add_common(CLI::App* sub, Overrides& o)
{
    sub->add_option("--config", o.config_path, "JSON config file; flags override its fields");
    sub->add_option("--seed", o.seed, "64-bit seed");
    sub->add_option("--workers", o.workers, "worker threads (results do not depend on it)");
    sub->add_option("-o,--output", o.output, "output path, '-' for stdout");
    sub->add_option("--backend", o.backend, "kernel backend: auto | scalar | avx2");
    sub->add_flag("--dump-config", o.dump_config, "print the effective config JSON and exit");
}

hmsim::ExperimentConfig build_config(CLI::App const& sub, hmsim::ExperimentKind kind, Overrides const& o)
{
    hmsim::ExperimentConfig c;
    if (sub.count("--config"))
        c = hmsim::load_config(o.config_path);
    c.kind = kind;
    auto given = [&](char const* name) { return sub.get_option_no_throw(name) && sub.count(name) > 0; };
    if (given("--theta"))
        c.theta_deg = o.theta_deg;
    if (given("--epsilon"))
    {
        if (kind == hmsim::ExperimentKind::spin)
            c.epsilon = o.epsilons.front();
        else
            c.epsilons = o.epsilons;
    }
    if (given("--d"))
    {
        if (kind == hmsim::ExperimentKind::spin)
            c.d = o.ds.front();
        else
            c.ds = o.ds;
    }
    if (given("--thetas"))
        c.thetas_deg = o.thetas_deg;
    if (given("--angles"))
        c.angles_deg = o.angles_deg;
    if (given("--optimize"))
        c.angles_deg.reset();
    if (given("--mode"))
    {
        if (o.chsh_mode == "analytic")
            c.chsh_mode = hmsim::ChshMode::analytic;
        else if (o.chsh_mode == "monte-carlo" || o.chsh_mode == "mc")
            c.chsh_mode = hmsim::ChshMode::monte_carlo;
        else
            throw hmsim::ValidationError("--mode must be 'analytic' or 'monte-carlo'");
    }
    if (given("--resolution"))
        c.resolution_deg = o.resolution_deg;
    if (given("--input"))
        c.input = o.input;
    if (given("--density-output"))
        c.density_output = o.density_output;
    if (given("--ratio"))
        c.ratio = o.ratio;
    if (given("-n"))
        c.n = o.n;
    if (given("--seed"))
        c.seed = o.seed;
    if (given("--workers"))
        c.workers = o.workers;
    if (given("--output"))
        c.output = o.output;
    if (given("--backend"))
        c.backend = o.backend;
    return c;
}

int run(hmsim::ExperimentConfig const& config, bool dump_config)
{
    if (dump_config)
    {
        hmsim::validate(config);
        write_output(config.output, hmsim::to_json(config).dump(2) + "\n");
        return exit_ok;
    }
    auto const result = hmsim::run_experiment(config);
    write_output(config.output, result.output);
    if (config.density_output && result.density_csv)
        write_output(*config.density_output, *result.density_csv);
    for (auto const& note : result.notes)
        std::cerr << "note: " << note << '\n';
    if (!result.flagged.empty())
    {
        std::string joined;
        for (auto const& f : result.flagged)
            joined += (joined.empty() ? "" : "; ") + f;
        return report_error("statistical", "estimate beyond 5 sigma of the analytic value: " + joined,
                            exit_runtime);
    }
    return exit_ok;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hidden-measurement model simulator"};
    app.require_subcommand(1);
    Overrides o;

    auto* spin = app.add_subcommand("spin", "single-setting measurement statistics");
    spin->add_option("--theta", o.theta_deg, "angle between state and axis (degrees)");
    spin->add_option("--epsilon", o.epsilons, "elastic half-width epsilon")->expected(1);
    spin->add_option("--d", o.ds, "elastic center d")->expected(1);
    spin->add_option("-n", o.n, "number of trials");
    add_common(spin, o);

    auto* sweep = app.add_subcommand("sweep", "grid over theta x epsilon x d");
    sweep->add_option("--thetas", o.thetas_deg, "angles (degrees)")->delimiter(',');
    sweep->add_option("--epsilon", o.epsilons, "epsilon values")->delimiter(',');
    sweep->add_option("--d", o.ds, "d values")->delimiter(',');
    sweep->add_option("-n", o.n, "trials per grid point");
    add_common(sweep, o);

    auto* chsh = app.add_subcommand("chsh", "CHSH value of the rod-coupled pair");
    chsh->add_option("--epsilon", o.epsilons, "epsilon values")->delimiter(',');
    chsh->add_option("--angles", o.angles_deg, "a,a',b,b' in degrees")->delimiter(',')->expected(4);
    chsh->add_flag("--optimize", o.optimize, "search for the maximizing coplanar setting per epsilon");
    chsh->add_option("--mode", o.chsh_mode, "analytic | monte-carlo");
    chsh->add_option("--resolution", o.resolution_deg, "optimizer grid resolution (degrees)");
    chsh->add_option("-n", o.n, "trials per correlation (monte-carlo)");
    add_common(chsh, o);

    auto* climit = app.add_subcommand("climit", "epsilon cut-and-renormalize of a density");
    climit->add_option("--input", o.input, "density CSV (x,phi) or (x,re,im)");
    climit->add_option("--epsilon", o.epsilons, "epsilon values")->delimiter(',');
    climit->add_option("--density-output", o.density_output, "transformed densities CSV");
    add_common(climit, o);

    auto* doubleslit = app.add_subcommand("doubleslit", "two-hump classical-limit scenario");
    doubleslit->add_option("--ratio", o.ratio, "taller/smaller peak ratio (>= 1)");
    doubleslit->add_option("--epsilon", o.epsilons, "epsilon values")->delimiter(',');
    add_common(doubleslit, o);

    auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::CallForHelp const& e)
    {
        return app.exit(e);
    }
    catch (CLI::CallForAllHelp const& e)
    {
        return app.exit(e);
    }
    catch (CLI::ParseError const& e)
    {
        return report_error("validation", e.what(), exit_validation);
    }

    try
    {
        if (selftest->parsed())
        {
            auto const results = hmsim::run_acceptance_suite(std::cout);
            for (auto const& r : results)
                if (!r.passed)
                    return exit_runtime;
            return exit_ok;
        }
        std::pair<CLI::App*, hmsim::ExperimentKind> const subs[]{
            {spin, hmsim::ExperimentKind::spin},
            {sweep, hmsim::ExperimentKind::sweep},
            {chsh, hmsim::ExperimentKind::chsh},
            {climit, hmsim::ExperimentKind::climit},
            {doubleslit, hmsim::ExperimentKind::doubleslit},
        };
        for (auto const& [sub, kind] : subs)
        {
            if (sub->parsed())
                return run(build_config(*sub, kind, o), o.dump_config);
        }
        return report_error("validation", "no subcommand given", exit_validation);
    }
    catch (hmsim::ValidationError const& e)
    {
        return report_error("validation", e.what(), exit_validation);
    }
    catch (hmsim::IoError const& e)
    {
        return report_error("io", e.what(), exit_io);
    }
    catch (std::exception const& e)
    {
        return report_error("runtime", e.what(), exit_runtime);
    }
}
