#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "phisim/expr.hpp"
#include "phisim/grid.hpp"
#include "phisim/maxwell.hpp"
#include "phisim/schrodinger.hpp"

// Scenario files: INI text, one section per concern. See docs/scenario_format.md.
namespace phisim {

enum class Kind {
  schrodinger,
  phi,
  maxwell_fields,
  maxwell_potential,
  reconstruct_phi,
  reconstruct_A,
  compare
};

std::string_view to_string(Kind k);
Kind parse_kind(std::string_view name);

/// Initial data. Each entry is an expression source; absent keys are empty.
struct InitialSpec {
  std::map<std::string, expr::Expression> fields;
  std::optional<int> eigenstate;
  bool normalize = false;
  double noise = 0.0;

  const expr::Expression* get(const std::string& name) const;
};

struct IntegratorSpec {
  std::string method;
  double dt = 0.0;      // resolved
  bool auto_dt = false;
  long steps = 0;
  long stride = 1;
  double safety = 0.0;  // used by auto dt
};

struct MonitorSpec {
  std::optional<double> max_norm_drift;
  std::optional<double> max_constraint;
  std::optional<double> max_identity;
  std::optional<double> max_roundtrip;
  std::optional<double> max_difference;
};

struct CompareSpec {
  std::string run_a;
  std::string run_b;
  std::string map_a = "none";
  std::string map_b = "none";
};

struct Scenario {
  std::filesystem::path path;
  std::string name;
  std::string hash;  // FNV-1a of the canonical text after overrides
  Kind kind = Kind::schrodinger;
  std::uint64_t seed = 0;

  std::optional<Grid> grid;
  QuantumParams quantum;
  double c = 1.0;
  expr::Bindings constants;

  std::optional<expr::Expression> potential;
  InitialSpec initial;
  SourceSpec sources;
  IntegratorSpec integrator;
  MonitorSpec monitors;
  CompareSpec compare;

  std::string input;  // trajectory snapshot for reconstruct kinds
  std::string snapshot_name = "trajectory.snap";
  std::string diagnostics_name = "diagnostics.csv";

  /// V sampled on the grid; zero when no potential is given.
  PotentialSpec sampled_potential() const;
};

/// Reads, applies overrides ("section.key=value") and validates. Throws
/// InvalidArgument naming the offending key.
Scenario load_scenario(const std::filesystem::path& path,
                       const std::vector<std::string>& overrides = {});
Scenario parse_scenario(const std::string& text, const std::filesystem::path& origin,
                        const std::vector<std::string>& overrides = {});

}  // namespace phisim
