#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "phisim/snapshot.hpp"

// Comparison of two recorded runs after an optional field map:
//   none             fields as stored
//   to_wavefunction  phi run -> psi_re, psi_im
//   a_to_fields      vector-potential run -> E_x..E_z, B_x..B_z
namespace phisim {

struct FieldSeries {
  std::string kind;
  Grid grid = Grid::line(4, 1.0);
  std::vector<std::string> names;
  std::vector<double> times;
  std::vector<std::vector<Eigen::ArrayXd>> frames;
};

FieldSeries map_snapshot(const Snapshot& s, const std::string& map);

struct CompareRow {
  double time = 0.0;
  double l2 = 0.0;        // sqrt(sum_fields sum (a - b)^2 dV)
  double max = 0.0;       // max |a - b| over fields and points
  double relative = 0.0;  // l2 / max(||a||, ||b||), 0 when both vanish
};

struct CompareReport {
  std::string kind_a, kind_b;
  std::vector<std::string> fields;
  std::vector<CompareRow> rows;
  std::size_t unmatched_a = 0;
  std::size_t unmatched_b = 0;
  double max_l2 = 0.0;
  double max_abs = 0.0;
  double max_relative = 0.0;
};

/// Frames match when their times agree within 1e-9 of the larger frame spacing.
CompareReport compare_series(const FieldSeries& a, const FieldSeries& b);
CompareReport compare_runs(const Snapshot& a, const Snapshot& b, const std::string& map_a,
                           const std::string& map_b);

void write_compare_json(const CompareReport& r, const std::filesystem::path& path);
void write_compare_csv(const CompareReport& r, const std::filesystem::path& path);
void print_compare_table(const CompareReport& r, std::ostream& out);

}  // namespace phisim
