#include "phisim/compare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "phisim/maxwell.hpp"
#include "phisim/phi_field.hpp"

namespace phisim {
namespace {

const std::vector<std::string> kFieldNames = {"E_x", "E_y", "E_z", "B_x", "B_y", "B_z"};

FieldSeries identity_series(const Snapshot& s) {
  return {s.header.kind, s.header.grid, s.header.fields, s.times, s.frames};
}

double spacing(const std::vector<double>& times) {
  return times.size() >= 2 ? (times.back() - times.front()) / static_cast<double>(times.size() - 1)
                           : 0.0;
}

}  // namespace

FieldSeries map_snapshot(const Snapshot& s, const std::string& map) {
  if (map == "none") return identity_series(s);
  const Grid& grid = s.header.grid;
  FieldSeries out;
  out.grid = grid;
  out.times = s.times;

  if (map == "to_wavefunction") {
    const std::size_t i_phi = s.field_index("phi");
    const std::size_t i_dot = s.field_index("phi_dot");
    const QuantumParams params{s.header.param("hbar"), s.header.param("mass")};
    const PotentialSpec V = PotentialSpec::from_samples(ScalarField(grid, s.static_field("V")));
    out.kind = "schrodinger";
    out.names = {"psi_re", "psi_im"};
    for (const auto& frame : s.frames) {
      const PhiState st{ScalarField(grid, frame[i_phi]), ScalarField(grid, frame[i_dot]), params, V};
      const WaveFunction psi = to_wavefunction(st);
      out.frames.push_back({psi.psi.values.real(), psi.psi.values.imag()});
    }
    return out;
  }

  if (map == "a_to_fields") {
    static const char* kA[3] = {"A_x", "A_y", "A_z"};
    static const char* kAdot[3] = {"A_dot_x", "A_dot_y", "A_dot_z"};
    std::array<std::size_t, 3> ia{}, id{};
    for (int a = 0; a < 3; ++a) {
      ia[a] = s.field_index(kA[a]);
      id[a] = s.field_index(kAdot[a]);
    }
    const double c = s.header.param("c");
    out.kind = "maxwell-fields";
    out.names = kFieldNames;
    for (const auto& frame : s.frames) {
      PotentialAState st{VectorField3(grid), VectorField3(grid), c};
      for (int a = 0; a < 3; ++a) {
        st.A[a].values = frame[ia[a]];
        st.A_dot[a].values = frame[id[a]];
      }
      const EMState f = a_to_fields(st);
      out.frames.push_back({f.E[0].values, f.E[1].values, f.E[2].values, f.B[0].values,
                            f.B[1].values, f.B[2].values});
    }
    return out;
  }
  throw InvalidArgument("unknown field map '" + map +
                        "' (expected none, to_wavefunction or a_to_fields)");
}

CompareReport compare_series(const FieldSeries& a, const FieldSeries& b) {
  if (!(a.grid == b.grid)) {
    throw GridMismatch("runs use different grids: " + a.grid.describe() + " vs " + b.grid.describe());
  }
  if (a.names != b.names) {
    throw InvalidArgument("runs carry different fields; choose a field map so they agree");
  }
  CompareReport r;
  r.kind_a = a.kind;
  r.kind_b = b.kind;
  r.fields = a.names;
  const double tol = 1e-9 * std::max(spacing(a.times), spacing(b.times));
  const double dv = a.grid.cell_volume();

  std::size_t j = 0;
  std::size_t matched = 0;
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    while (j < b.times.size() && b.times[j] < a.times[i] - tol) ++j;
    if (j == b.times.size() || std::abs(b.times[j] - a.times[i]) > tol) continue;
    CompareRow row;
    row.time = a.times[i];
    double diff2 = 0.0, ref_a2 = 0.0, ref_b2 = 0.0;
    for (std::size_t f = 0; f < a.names.size(); ++f) {
      const Eigen::ArrayXd d = a.frames[i][f] - b.frames[j][f];
      diff2 += d.square().sum();
      ref_a2 += a.frames[i][f].square().sum();
      ref_b2 += b.frames[j][f].square().sum();
      if (d.size()) row.max = std::max(row.max, d.abs().maxCoeff());
    }
    row.l2 = std::sqrt(diff2 * dv);
    const double ref = std::sqrt(std::max(ref_a2, ref_b2) * dv);
    row.relative = ref > 0.0 ? row.l2 / ref : (row.l2 > 0.0 ? INFINITY : 0.0);
    r.max_l2 = std::max(r.max_l2, row.l2);
    r.max_abs = std::max(r.max_abs, row.max);
    r.max_relative = std::max(r.max_relative, row.relative);
    r.rows.push_back(row);
    ++matched;
    ++j;
  }
  r.unmatched_a = a.times.size() - matched;
  r.unmatched_b = b.times.size() - matched;
  if (r.rows.empty()) throw InvalidArgument("runs share no snapshot times");
  return r;
}

CompareReport compare_runs(const Snapshot& a, const Snapshot& b, const std::string& map_a,
                           const std::string& map_b) {
  return compare_series(map_snapshot(a, map_a), map_snapshot(b, map_b));
}

void write_compare_json(const CompareReport& r, const std::filesystem::path& path) {
  nlohmann::json j;
  j["kind_a"] = r.kind_a;
  j["kind_b"] = r.kind_b;
  j["fields"] = r.fields;
  j["matched_frames"] = r.rows.size();
  j["unmatched_a"] = r.unmatched_a;
  j["unmatched_b"] = r.unmatched_b;
  j["max_l2"] = r.max_l2;
  j["max_abs"] = r.max_abs;
  j["max_relative_l2"] = r.max_relative;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"time", row.time}, {"l2", row.l2}, {"max_abs", row.max},
                    {"relative_l2", row.relative}});
  }
  j["frames"] = std::move(rows);
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_compare_csv(const CompareReport& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << "time,l2,max_abs,relative_l2\n";
  for (const auto& row : r.rows) {
    out << format_double(row.time) << ',' << format_double(row.l2) << ',' << format_double(row.max)
        << ',' << format_double(row.relative) << '\n';
  }
}

void print_compare_table(const CompareReport& r, std::ostream& out) {
  char buf[160];
  out << r.kind_a << " vs " << r.kind_b << ", " << r.rows.size() << " matched frames\n";
  std::snprintf(buf, sizeof buf, "%14s %14s %14s %14s\n", "time", "l2", "max_abs", "relative");
  out << buf;
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%14.6g %14.6e %14.6e %14.6e\n", row.time, row.l2, row.max,
                  row.relative);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "max l2 %.6e  max abs %.6e  max relative %.6e\n", r.max_l2,
                r.max_abs, r.max_relative);
  out << buf;
}

}  // namespace phisim
