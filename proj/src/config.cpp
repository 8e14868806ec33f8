#include "hmsim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <type_traits>

#include "hmsim/error.hpp"
#include "hmsim/geometry.hpp"
#include "hmsim/kernels.hpp"

namespace hmsim
{
std::string to_string(ExperimentKind kind)
{
    switch (kind)
    {
        case ExperimentKind::spin:
            return "spin";
        case ExperimentKind::sweep:
            return "sweep";
        case ExperimentKind::chsh:
            return "chsh";
        case ExperimentKind::climit:
            return "climit";
        case ExperimentKind::doubleslit:
            return "doubleslit";
    }
    return "unknown";
}

ExperimentKind experiment_kind_from_string(std::string const& name)
{
    for (auto k : {ExperimentKind::spin,
                   ExperimentKind::sweep,
                   ExperimentKind::chsh,
                   ExperimentKind::climit,
                   ExperimentKind::doubleslit})
    {
        if (to_string(k) == name)
            return k;
    }
    throw ValidationError("unknown experiment kind '" + name + "'");
}

nlohmann::json to_json(ExperimentConfig const& c)
{
    nlohmann::json j;
    j["experiment"] = to_string(c.kind);
    j["theta_deg"] = c.theta_deg;
    j["epsilon"] = c.epsilon;
    j["d"] = c.d;
    j["thetas_deg"] = c.thetas_deg;
    j["epsilons"] = c.epsilons;
    j["ds"] = c.ds;
    j["angles_deg"] = c.angles_deg ? nlohmann::json(*c.angles_deg) : nlohmann::json(nullptr);
    j["chsh_mode"] = c.chsh_mode == ChshMode::analytic ? "analytic" : "monte-carlo";
    j["resolution_deg"] = c.resolution_deg;
    j["input"] = c.input ? nlohmann::json(*c.input) : nlohmann::json(nullptr);
    j["density_output"] = c.density_output ? nlohmann::json(*c.density_output)
                                           : nlohmann::json(nullptr);
    j["ratio"] = c.ratio;
    j["n"] = c.n;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["output"] = c.output;
    j["backend"] = c.backend;
    return j;
}

namespace
{
template<class T>
void read_field(nlohmann::json const& j, char const* key, T& out)
{
    if (auto it = j.find(key); it != j.end())
    {
        if constexpr (std::is_unsigned_v<T>)
        {
            if (!it->is_number_unsigned())
                throw ValidationError(std::string("config field '") + key
                                      + "' must be a nonnegative integer");
        }
        try
        {
            out = it->get<T>();
        }
        catch (nlohmann::json::exception const& e)
        {
            throw ValidationError(std::string("config field '") + key + "': " + e.what());
        }
    }
}

template<class T>
void read_optional(nlohmann::json const& j, char const* key, std::optional<T>& out)
{
    if (auto it = j.find(key); it != j.end())
    {
        if (it->is_null())
        {
            out.reset();
            return;
        }
        T value;
        read_field(j, key, value);
        out = std::move(value);
    }
}
}  // namespace

ExperimentConfig config_from_json(nlohmann::json const& j)
{
    if (!j.is_object())
    {
        throw ValidationError("config must be a JSON object");
    }
    static std::set<std::string> const known{
        "experiment", "theta_deg", "epsilon",        "d",      "thetas_deg", "epsilons",
        "ds",         "angles_deg", "chsh_mode",     "resolution_deg", "input", "density_output",
        "ratio",      "n",          "seed",          "workers", "output",    "backend"};
    for (auto const& [key, value] : j.items())
    {
        if (!known.count(key))
            throw ValidationError("unknown config field '" + key + "'");
    }

    ExperimentConfig c;
    std::string kind = to_string(c.kind);
    read_field(j, "experiment", kind);
    c.kind = experiment_kind_from_string(kind);
    read_field(j, "theta_deg", c.theta_deg);
    read_field(j, "epsilon", c.epsilon);
    read_field(j, "d", c.d);
    read_field(j, "thetas_deg", c.thetas_deg);
    read_field(j, "epsilons", c.epsilons);
    read_field(j, "ds", c.ds);
    read_optional(j, "angles_deg", c.angles_deg);
    std::string mode = c.chsh_mode == ChshMode::analytic ? "analytic" : "monte-carlo";
    read_field(j, "chsh_mode", mode);
    if (mode == "analytic")
        c.chsh_mode = ChshMode::analytic;
    else if (mode == "monte-carlo")
        c.chsh_mode = ChshMode::monte_carlo;
    else
        throw ValidationError("chsh_mode must be 'analytic' or 'monte-carlo'");
    read_field(j, "resolution_deg", c.resolution_deg);
    read_optional(j, "input", c.input);
    read_optional(j, "density_output", c.density_output);
    read_field(j, "ratio", c.ratio);
    read_field(j, "n", c.n);
    read_field(j, "seed", c.seed);
    read_field(j, "workers", c.workers);
    read_field(j, "output", c.output);
    read_field(j, "backend", c.backend);
    return c;
}

ExperimentConfig load_config(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw IoError("cannot open config file '" + path + "'");
    }
    nlohmann::json j;
    try
    {
        in >> j;
    }
    catch (nlohmann::json::parse_error const& e)
    {
        throw ValidationError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

namespace
{
void require(bool ok, std::string const& message)
{
    if (!ok)
        throw ValidationError(message);
}

bool finite_all(std::vector<double> const& xs)
{
    for (double x : xs)
        if (!std::isfinite(x))
            return false;
    return true;
}

void require_epsilon_list(std::vector<double> const& eps, bool allow_zero)
{
    require(!eps.empty(), "epsilon list must not be empty");
    for (double e : eps)
    {
        bool const ok = allow_zero ? (e >= 0 && e <= 1) : (e > 0 && e <= 1);
        require(ok, allow_zero ? "epsilon values must lie in [0, 1]"
                               : "epsilon values must lie in (0, 1]");
    }
}
}  // namespace

void validate(ExperimentConfig const& c)
{
    require(c.workers >= 1, "workers must be >= 1");
    kernels::backend_from_string(c.backend);
    require(!c.output.empty(), "output path must not be empty");

    switch (c.kind)
    {
        case ExperimentKind::spin:
            require(std::isfinite(c.theta_deg), "theta_deg must be finite");
            require(ElasticSpec::is_valid(c.epsilon, c.d),
                    "need 0 <= epsilon <= 1 and -1 + epsilon <= d <= 1 - epsilon");
            require(c.n >= 1, "n must be >= 1");
            break;
        case ExperimentKind::sweep:
            require(!c.thetas_deg.empty() && finite_all(c.thetas_deg),
                    "thetas_deg must be a non-empty list of finite values");
            require_epsilon_list(c.epsilons, true);
            require(!c.ds.empty() && finite_all(c.ds), "ds must be a non-empty list of finite values");
            require(c.n >= 1, "n must be >= 1");
            break;
        case ExperimentKind::chsh:
            require_epsilon_list(c.epsilons, true);
            if (c.angles_deg)
            {
                require(c.angles_deg->size() == 4 && finite_all(*c.angles_deg),
                        "angles_deg must hold four finite angles: a, a', b, b'");
            }
            else
            {
                require(c.resolution_deg > 0, "resolution_deg must be positive");
                auto const steps = std::llround(360.0 / c.resolution_deg);
                require(steps >= 4
                            && std::fabs(static_cast<double>(steps) * c.resolution_deg - 360.0)
                                   <= 1e-9,
                        "resolution_deg must divide 360");
            }
            require(c.chsh_mode == ChshMode::analytic || c.n >= 1,
                    "monte-carlo CHSH requires n >= 1");
            break;
        case ExperimentKind::climit:
            require_epsilon_list(c.epsilons, false);
            break;
        case ExperimentKind::doubleslit:
            require(std::isfinite(c.ratio) && c.ratio >= 1, "ratio must be finite and >= 1");
            require_epsilon_list(c.epsilons, false);
            break;
    }
}

}  // namespace hmsim
