#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hmsim/config.hpp"

namespace hmsim
{
struct RunResult
{
    std::string output;                      //!< CSV or JSON, per experiment
    std::optional<std::string> density_csv;  //!< climit transformed densities
    // Rows whose MC estimate sits more than 5 sigma from the analytic value
    std::vector<std::string> flagged;
    std::vector<std::string> notes;
};

inline constexpr double flag_sigma = 5.0;

// Fixed column orders for golden files
inline constexpr char const* spin_csv_header
    = "theta_deg,epsilon,d,n,seed,freq_o1,analytic_p1,stderr,chi2";
inline constexpr char const* chsh_csv_header
    = "epsilon,a,a_prime,b,b_prime,S_analytic,S_mc,stderr";

// Validates, selects the kernel backend, and runs the configured experiment
RunResult run_experiment(ExperimentConfig const& config);

RunResult run_spin(ExperimentConfig const& config);
RunResult run_sweep(ExperimentConfig const& config);
RunResult run_chsh(ExperimentConfig const& config);
RunResult run_climit(ExperimentConfig const& config);
RunResult run_doubleslit(ExperimentConfig const& config);

}  // namespace hmsim
