#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "phisim/maxwell.hpp"
#include "phisim/phi_field.hpp"
#include "phisim/scenario.hpp"

namespace phisim {

namespace exit_status {
inline constexpr int ok = 0;
inline constexpr int config = 1;
inline constexpr int numerical = 2;
inline constexpr int invariant = 3;
}  // namespace exit_status

struct RunOptions {
  /// Every run writes into out_root / scenario name. Relative input paths in
  /// reconstruct and compare scenarios are resolved against out_root.
  std::filesystem::path out_root = "runs";
};

struct RunResult {
  int exit_code = exit_status::ok;
  std::string message;
  std::filesystem::path directory;
  std::vector<std::string> violations;  // monitor ceilings exceeded
};

/// Executes a scenario. Never throws for configuration or numerical
/// problems; they are mapped to exit codes with a message.
RunResult run_scenario(const Scenario& s, const RunOptions& options);

/// Runs scenarios with up to threads concurrent workers. Simulation kinds go
/// first, then reconstructions, then comparisons; results follow input order.
std::vector<RunResult> run_suite(const std::vector<Scenario>& scenarios, const RunOptions& options,
                                 int threads);

// Initial-state builders shared by the runner and the tests.
WaveFunction initial_wavefunction(const Scenario& s, const PotentialSpec& V);
PhiState initial_phi(const Scenario& s, const PotentialSpec& V);
EMState initial_fields(const Scenario& s);
PotentialAState initial_potential(const Scenario& s);

}  // namespace phisim
