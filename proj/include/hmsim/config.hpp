#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace hmsim
{
enum class ExperimentKind
{
    spin,
    sweep,
    chsh,
    climit,
    doubleslit,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(std::string const& name);

enum class ChshMode
{
    analytic,
    monte_carlo,
};

inline constexpr std::uint64_t default_seed = 20240607;

/*!
 * Everything needed to reproduce one harness run.
 *
 * Fields irrelevant to the chosen experiment are carried along unchanged so
 * that serialization round-trips exactly.
 */
struct ExperimentConfig
{
    ExperimentKind kind{ExperimentKind::spin};

    // spin
    double theta_deg{60};
    double epsilon{1};
    double d{0};

    // sweep (theta x epsilon x d) and the epsilon lists of chsh/climit/doubleslit
    std::vector<double> thetas_deg{0, 30, 60, 90, 120, 150, 180};
    std::vector<double> epsilons{1};
    std::vector<double> ds{0};

    // chsh: explicit coplanar angles a, a', b, b' (degrees) or optimize per epsilon
    std::optional<std::vector<double>> angles_deg;
    ChshMode chsh_mode{ChshMode::analytic};
    double resolution_deg{1};

    // climit: density CSV (Gaussian fixture when absent) and optional CSV output
    std::optional<std::string> input;
    std::optional<std::string> density_output;

    // doubleslit
    double ratio{1};

    std::uint64_t n{1000000};
    std::uint64_t seed{default_seed};
    unsigned workers{1};
    std::string output{"-"};
    std::string backend{"auto"};

    bool operator==(ExperimentConfig const&) const = default;
};

nlohmann::json to_json(ExperimentConfig const& config);
// Missing keys keep their defaults; unknown keys are rejected
ExperimentConfig config_from_json(nlohmann::json const& j);
ExperimentConfig load_config(std::string const& path);

// Throws ValidationError on the first violated precondition
void validate(ExperimentConfig const& config);

}  // namespace hmsim
