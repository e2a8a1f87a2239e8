#include "phisim/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <random>
#include <sstream>
#include <thread>

#include "phisim/compare.hpp"
#include "phisim/operators.hpp"
#include "phisim/reconstruction.hpp"
#include "phisim/snapshot.hpp"

namespace phisim {
namespace {

namespace fs = std::filesystem;

class Csv {
 public:
  Csv(const fs::path& path, std::vector<std::string> columns) : columns_(columns.size()) {
    out_.open(path, std::ios::trunc);
    if (!out_) throw InvalidArgument("cannot write " + path.string());
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
  }
  void row(long index, const std::vector<double>& values) {
    if (values.size() + 1 != columns_) throw Error("diagnostics row has the wrong width");
    out_ << index;
    for (double v : values) {
      if (!std::isfinite(v)) throw NumericalError("non-finite diagnostic at row " + std::to_string(index));
      out_ << ',' << format_double(v);
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
  std::size_t columns_;
};

class Monitor {
 public:
  void check(const std::optional<double>& ceiling, double value, const std::string& what, double t) {
    if (!ceiling || value <= *ceiling || recorded_.count(what)) return;
    recorded_.insert(what);
    std::ostringstream os;
    os << what << " = " << value << " exceeds ceiling " << *ceiling << " at t = " << t;
    violations.push_back(os.str());
  }
  std::vector<std::string> violations;

 private:
  std::set<std::string> recorded_;
};

// 53-bit uniform doubles in [-1, 1) from the raw engine output, independent
// of the standard library's distribution implementations.
class Noise {
 public:
  explicit Noise(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-52 - 1.0; }
  void add(Eigen::ArrayXd& a, double amplitude) {
    for (Eigen::Index i = 0; i < a.size(); ++i) a[i] += amplitude * next();
  }

 private:
  std::mt19937_64 engine_;
};

ScalarField sample_or_zero(const Scenario& s, const std::string& key, double t = 0.0) {
  const expr::Expression* e = s.initial.get(key);
  if (!e) return ScalarField(*s.grid);
  return expr::sample(*e, *s.grid, s.constants, t);
}

SnapshotHeader header_for(const Scenario& s, const std::string& kind, const Grid& grid,
                          std::vector<std::string> fields, std::vector<std::string> statics,
                          double frame_dt) {
  SnapshotHeader h;
  h.kind = kind;
  h.grid = grid;
  h.fields = std::move(fields);
  h.static_fields = std::move(statics);
  h.scenario_hash = s.hash;
  h.dt = frame_dt;
  h.params = {{"step_dt", s.integrator.dt}, {"stride", static_cast<double>(s.integrator.stride)}};
  return h;
}

bool is_frame(const Scenario& s, long n) { return n % s.integrator.stride == 0; }

double step_time(const Scenario& s, long n) { return static_cast<double>(n) * s.integrator.dt; }

const std::vector<std::string> kE = {"E_x", "E_y", "E_z"};
const std::vector<std::string> kB = {"B_x", "B_y", "B_z"};
const std::vector<std::string> kFields = {"E_x", "E_y", "E_z", "B_x", "B_y", "B_z"};
const std::vector<std::string> kPotential = {"A_x",     "A_y",     "A_z",
                                             "A_dot_x", "A_dot_y", "A_dot_z"};

std::vector<const Eigen::ArrayXd*> pointers(const VectorField3& a, const VectorField3& b) {
  return {&a[0].values, &a[1].values, &a[2].values, &b[0].values, &b[1].values, &b[2].values};
}

double relative(double value, double scale) { return scale > 0.0 ? value / scale : 0.0; }

// ---------------------------------------------------------------- quantum

void run_schrodinger(const Scenario& s, const fs::path& dir, RunResult& result) {
  const PotentialSpec V = s.sampled_potential();
  WaveFunction psi = initial_wavefunction(s, V);
  const Grid& grid = *s.grid;
  auto header = header_for(s, "schrodinger", grid, {"psi_re", "psi_im"}, {"V"},
                           s.integrator.dt * static_cast<double>(s.integrator.stride));
  header.params.insert({{"hbar", s.quantum.hbar}, {"mass", s.quantum.mass}});
  SnapshotWriter snap(dir / s.snapshot_name, header, {V.sampled().values});
  Csv csv(dir / s.diagnostics_name,
          {"step", "time", "norm", "energy", "norm_drift", "solver_residual"});
  Monitor monitor;

  std::optional<DenseSpectrum> spectrum;
  if (s.integrator.method == "dense") spectrum.emplace(V, s.quantum);
  const ComplexField psi0 = psi.psi;
  const double norm0 = std::pow(l2_norm(psi.psi), 2);
  double solver_residual = 0.0;
  for (long n = 0; n <= s.integrator.steps; ++n) {
    const double t = step_time(s, n);
    if (n > 0) {
      if (spectrum) {
        psi.psi = spectrum->propagate(psi0, t);
      } else {
        CrankNicolsonReport rep;
        psi = crank_nicolson_step(psi, V, s.integrator.dt, {}, &rep);
        solver_residual = rep.relative_residual;
      }
      if (!psi.psi.all_finite()) throw NumericalError("non-finite wave function at step " + std::to_string(n));
    }
    const double norm = std::pow(l2_norm(psi.psi), 2);
    const double energy = inner(psi.psi, apply_hamiltonian(psi, V)).real();
    const double drift = relative(std::abs(norm - norm0), norm0);
    csv.row(n, {t, norm, energy, drift, solver_residual});
    monitor.check(s.monitors.max_norm_drift, drift, "norm drift", t);
    if (is_frame(s, n)) {
      const Eigen::ArrayXd re = psi.psi.values.real(), im = psi.psi.values.imag();
      snap.write_frame(t, {&re, &im});
    }
  }
  snap.close();
  result.violations = monitor.violations;
}

void run_phi(const Scenario& s, const fs::path& dir, RunResult& result) {
  const PotentialSpec V = s.sampled_potential();
  PhiVerlet stepper(initial_phi(s, V), s.integrator.dt);
  const Grid& grid = *s.grid;
  auto header = header_for(s, "phi", grid, {"phi", "phi_dot"}, {"V"},
                           s.integrator.dt * static_cast<double>(s.integrator.stride));
  header.params.insert({{"hbar", s.quantum.hbar}, {"mass", s.quantum.mass}});
  SnapshotWriter snap(dir / s.snapshot_name, header, {V.sampled().values});
  Csv csv(dir / s.diagnostics_name,
          {"step", "time", "norm", "energy", "identity_residual", "norm_drift"});
  Monitor monitor;
  const double hbar = s.quantum.hbar;
  const double dv = grid.cell_volume();
  double norm0 = 0.0;
  for (long n = 0; n <= s.integrator.steps; ++n) {
    const double t = step_time(s, n);
    if (n > 0) {
      stepper.step();
      const PhiState& st = stepper.state();
      if (!st.phi.all_finite() || !st.phi_dot.all_finite()) {
        throw NumericalError("non-finite phi at step " + std::to_string(n));
      }
    }
    const PhiState& st = stepper.state();
    const Eigen::ArrayXd l_phi = apply_wave_operator(st.phi, V, s.quantum).values;
    const Eigen::ArrayXd density = l_phi.square() + (hbar * st.phi_dot.values).square();
    const Eigen::ArrayXd energy_density =
        0.5 * hbar * st.phi_dot.values.square() + l_phi.square() / (2.0 * hbar);
    const double norm = density.sum() * dv;
    if (n == 0) norm0 = norm;
    const double peak = density.maxCoeff();
    const double identity =
        relative((density - 2.0 * hbar * energy_density).abs().maxCoeff(), peak);
    const double drift = relative(std::abs(norm - norm0), norm0);
    csv.row(n, {t, norm, energy_density.sum() * dv, identity, drift});
    monitor.check(s.monitors.max_norm_drift, drift, "norm drift", t);
    monitor.check(s.monitors.max_identity, identity, "probability-energy identity residual", t);
    if (is_frame(s, n)) snap.write_frame(t, {&st.phi.values, &st.phi_dot.values});
  }
  snap.close();
  result.violations = monitor.violations;
}

// ---------------------------------------------------------------- maxwell

struct ConstraintColumns {
  double gauss = 0.0;
  double div_b = 0.0;
  double rel = 0.0;
};

ConstraintColumns em_constraints(const EMState& st, const ScalarField& rho) {
  const auto [gauss, div_b] = constraint_residual(st, rho);
  const double scale =
      max_wavenumber(st.grid()) * std::max(max_abs(st.E), max_abs(st.B)) + max_abs(rho);
  return {gauss, div_b, relative(std::max(gauss, div_b), scale)};
}

void run_maxwell_fields(const Scenario& s, const fs::path& dir, RunResult& result) {
  EMState st = initial_fields(s);
  const Grid& grid = *s.grid;
  auto header = header_for(s, "maxwell-fields", grid, kFields, {},
                           s.integrator.dt * static_cast<double>(s.integrator.stride));
  header.params.insert({"c", s.c});
  SnapshotWriter snap(dir / s.snapshot_name, header, {});
  Csv csv(dir / s.diagnostics_name, {"step", "time", "H_prime", "H", "gauss_residual", "div_B",
                                     "w_residual", "constraint_relative", "H_prime_drift"});
  Monitor monitor;
  double h0 = 0.0;
  for (long n = 0; n <= s.integrator.steps; ++n) {
    const double t = step_time(s, n);
    if (n > 0) {
      st = rk4_step(st, s.sources, step_time(s, n - 1), s.integrator.dt);
      if (!st.E.all_finite() || !st.B.all_finite()) {
        throw NumericalError("non-finite fields at step " + std::to_string(n));
      }
    }
    const VectorField3 j = s.sources.J(grid, t);
    const auto h = em_hamiltonians(st, j);
    if (n == 0) h0 = h.H_prime;
    const auto c = em_constraints(st, s.sources.rho(grid, t));
    const double drift = relative(std::abs(h.H_prime - h0), h0);
    csv.row(n, {t, h.H_prime, h.H, c.gauss, c.div_b, w_residual(st, s.sources, t), c.rel, drift});
    monitor.check(s.monitors.max_constraint, c.rel, "relative constraint residual", t);
    monitor.check(s.monitors.max_norm_drift, drift, "H' drift", t);
    if (is_frame(s, n)) snap.write_frame(t, pointers(st.E, st.B));
  }
  snap.close();
  result.violations = monitor.violations;
}

void run_maxwell_potential(const Scenario& s, const fs::path& dir, RunResult& result) {
  AVerlet stepper(initial_potential(s), s.sources, 0.0, s.integrator.dt);
  const Grid& grid = *s.grid;
  auto header = header_for(s, "maxwell-potential", grid, kPotential, {},
                           s.integrator.dt * static_cast<double>(s.integrator.stride));
  header.params.insert({"c", s.c});
  SnapshotWriter snap(dir / s.snapshot_name, header, {});
  Csv csv(dir / s.diagnostics_name,
          {"step", "time", "H_prime", "gauss_residual", "div_B", "a_constraint",
           "constraint_relative", "H_prime_drift"});
  Monitor monitor;
  double h0 = 0.0;
  for (long n = 0; n <= s.integrator.steps; ++n) {
    const double t = step_time(s, n);
    if (n > 0) {
      stepper.step();
      if (!stepper.state().A.all_finite() || !stepper.state().A_dot.all_finite()) {
        throw NumericalError("non-finite vector potential at step " + std::to_string(n));
      }
    }
    const PotentialAState& st = stepper.state();
    const EMState fields = a_to_fields(st);
    const ScalarField rho = s.sources.rho(grid, t);
    const auto h = em_hamiltonians(fields, s.sources.J(grid, t));
    if (n == 0) h0 = h.H_prime;
    const auto c = em_constraints(fields, rho);
    const double a_res = a_constraint_residual(st, rho);
    const double a_scale = max_wavenumber(grid) * max_abs(st.A_dot) + s.c * max_abs(rho);
    const double rel = std::max(c.rel, relative(a_res, a_scale));
    const double drift = relative(std::abs(h.H_prime - h0), h0);
    csv.row(n, {t, h.H_prime, c.gauss, c.div_b, a_res, rel, drift});
    monitor.check(s.monitors.max_constraint, rel, "relative constraint residual", t);
    monitor.check(s.monitors.max_norm_drift, drift, "H' drift", t);
    if (is_frame(s, n)) snap.write_frame(t, pointers(st.A, st.A_dot));
  }
  snap.close();
  result.violations = monitor.violations;
}

// ---------------------------------------------------------------- reconstruction

fs::path resolve(const RunOptions& options, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : options.out_root / path;
}

void run_reconstruct_phi(const Scenario& s, const RunOptions& options, const fs::path& dir,
                         RunResult& result) {
  const Snapshot in = read_snapshot(resolve(options, s.input));
  if (in.header.kind != "schrodinger") {
    throw InvalidArgument("reconstruct-phi needs a schrodinger snapshot, got " + in.header.kind);
  }
  const Grid& grid = in.header.grid;
  QuantumTrajectory traj;
  traj.params = {in.header.param("hbar"), in.header.param("mass")};
  traj.times = in.times;
  for (std::size_t f = 0; f < in.frames.size(); ++f) {
    traj.psi.emplace_back(ScalarField(grid, in.field(f, "psi_re")),
                          ScalarField(grid, in.field(f, "psi_im")));
  }
  const PotentialSpec V = PotentialSpec::from_samples(ScalarField(grid, in.static_field("V")));
  const PhiTrajectory rec = reconstruct_phi(traj, V);

  SnapshotHeader header = in.header;
  header.kind = "phi";
  header.fields = {"phi", "phi_dot"};
  header.scenario_hash = s.hash;
  header.frames = 0;
  SnapshotWriter snap(dir / s.snapshot_name, header, {V.sampled().values});
  Csv csv(dir / s.diagnostics_name, {"index", "time", "l2_error", "relative_error"});
  Monitor monitor;
  double worst = 0.0;
  for (std::size_t f = 0; f < rec.states.size(); ++f) {
    const WaveFunction back = to_wavefunction(rec.states[f]);
    const double err = l2_norm(back.psi - traj.psi[f]);
    const double rel = relative(err, l2_norm(traj.psi[f]));
    worst = std::max(worst, rel);
    csv.row(static_cast<long>(f), {rec.times[f], err, rel});
    monitor.check(s.monitors.max_roundtrip, rel, "round-trip error", rec.times[f]);
    snap.write_frame(rec.times[f], {&rec.states[f].phi.values, &rec.states[f].phi_dot.values});
  }
  snap.close();
  std::ostringstream os;
  os << "round trip: max relative L2 error " << worst << " (elliptic " << rec.elliptic.method
     << ", residual " << rec.elliptic.relative_residual << ")";
  result.message = os.str();
  result.violations = monitor.violations;
}

void run_reconstruct_A(const Scenario& s, const RunOptions& options, const fs::path& dir,
                       RunResult& result) {
  const Snapshot in = read_snapshot(resolve(options, s.input));
  if (in.header.kind != "maxwell-fields") {
    throw InvalidArgument("reconstruct-A needs a maxwell-fields snapshot, got " + in.header.kind);
  }
  const Grid& grid = in.header.grid;
  const double c = in.header.param("c");
  FieldTrajectory traj;
  traj.times = in.times;
  for (std::size_t f = 0; f < in.frames.size(); ++f) {
    EMState st{VectorField3(grid), VectorField3(grid), c};
    for (int a = 0; a < 3; ++a) {
      st.E[a].values = in.field(f, kE[static_cast<std::size_t>(a)]);
      st.B[a].values = in.field(f, kB[static_cast<std::size_t>(a)]);
    }
    traj.fields.push_back(std::move(st));
  }
  const ATrajectory rec = reconstruct_A(traj);

  SnapshotHeader header = in.header;
  header.kind = "maxwell-potential";
  header.fields = kPotential;
  header.scenario_hash = s.hash;
  header.frames = 0;
  SnapshotWriter snap(dir / s.snapshot_name, header, {});
  Csv csv(dir / s.diagnostics_name, {"index", "time", "l2_error", "relative_error"});
  Monitor monitor;
  double worst = 0.0;
  for (std::size_t f = 0; f < rec.states.size(); ++f) {
    const EMState back = a_to_fields(rec.states[f]);
    const double err = std::hypot(l2_norm(back.E - traj.fields[f].E), l2_norm(back.B - traj.fields[f].B));
    const double ref = std::hypot(l2_norm(traj.fields[f].E), l2_norm(traj.fields[f].B));
    const double rel = relative(err, ref);
    worst = std::max(worst, rel);
    csv.row(static_cast<long>(f), {rec.times[f], err, rel});
    monitor.check(s.monitors.max_roundtrip, rel, "round-trip error", rec.times[f]);
    snap.write_frame(rec.times[f], pointers(rec.states[f].A, rec.states[f].A_dot));
  }
  snap.close();
  std::ostringstream os;
  os << "round trip: max relative field error " << worst;
  result.message = os.str();
  result.violations = monitor.violations;
}

void run_compare(const Scenario& s, const RunOptions& options, const fs::path& dir,
                 RunResult& result) {
  const Snapshot a = read_snapshot(resolve(options, s.compare.run_a));
  const Snapshot b = read_snapshot(resolve(options, s.compare.run_b));
  const CompareReport r = compare_runs(a, b, s.compare.map_a, s.compare.map_b);
  write_compare_json(r, dir / "compare.json");
  write_compare_csv(r, dir / "compare.csv");
  std::ofstream table(dir / "compare.txt");
  print_compare_table(r, table);
  std::ostringstream os;
  os << "compared " << r.rows.size() << " frames: max L2 " << r.max_l2 << ", max relative "
     << r.max_relative;
  result.message = os.str();
  Monitor monitor;
  monitor.check(s.monitors.max_difference, r.max_relative, "relative difference", r.rows.back().time);
  result.violations = monitor.violations;
}

int stage(Kind k) {
  switch (k) {
    case Kind::reconstruct_phi:
    case Kind::reconstruct_A:
      return 1;
    case Kind::compare:
      return 2;
    default:
      return 0;
  }
}

}  // namespace

WaveFunction initial_wavefunction(const Scenario& s, const PotentialSpec& V) {
  const Grid& grid = *s.grid;
  WaveFunction psi{ComplexField(grid), s.quantum};
  if (s.initial.eigenstate) {
    const DenseSpectrum spectrum(V, s.quantum);
    psi.psi = ComplexField(spectrum.pair(static_cast<std::size_t>(*s.initial.eigenstate)).state,
                           ScalarField(grid));
  } else {
    psi.psi = ComplexField(sample_or_zero(s, "psi_re"), sample_or_zero(s, "psi_im"));
  }
  if (s.initial.noise > 0.0) {
    Noise noise(s.seed);
    Eigen::ArrayXd re = psi.psi.values.real(), im = psi.psi.values.imag();
    noise.add(re, s.initial.noise);
    noise.add(im, s.initial.noise);
    psi.psi = ComplexField(ScalarField(grid, re), ScalarField(grid, im));
  }
  if (s.initial.normalize) {
    const double norm = l2_norm(psi.psi);
    if (norm == 0.0) throw InvalidArgument("cannot normalize a zero initial wave function");
    psi.psi.values /= norm;
  }
  return psi;
}

PhiState initial_phi(const Scenario& s, const PotentialSpec& V) {
  if (s.initial.eigenstate) {
    const DenseSpectrum spectrum(V, s.quantum);
    const Eigenpair p = spectrum.pair(static_cast<std::size_t>(*s.initial.eigenstate));
    PhiState st = stationary_phi(p.state, p.energy, 0.0, s.quantum, V);
    if (s.initial.noise > 0.0) {
      Noise noise(s.seed);
      noise.add(st.phi.values, s.initial.noise);
      noise.add(st.phi_dot.values, s.initial.noise);
    }
    return st;
  }
  if (s.initial.get("psi_re") || s.initial.get("psi_im")) {
    const WaveFunction psi = initial_wavefunction(s, V);
    const ScalarField c = solve_elliptic(V, -psi.psi.real(), s.quantum);
    return {c, (1.0 / s.quantum.hbar) * psi.psi.imag(), s.quantum, V};
  }
  PhiState st{sample_or_zero(s, "phi"), sample_or_zero(s, "phi_dot"), s.quantum, V};
  if (s.initial.noise > 0.0) {
    Noise noise(s.seed);
    noise.add(st.phi.values, s.initial.noise);
    noise.add(st.phi_dot.values, s.initial.noise);
  }
  return st;
}

EMState initial_fields(const Scenario& s) {
  if (s.initial.noise > 0.0) throw InvalidArgument("initial.noise is not supported for Maxwell kinds");
  return {VectorField3(sample_or_zero(s, "E_x"), sample_or_zero(s, "E_y"), sample_or_zero(s, "E_z")),
          VectorField3(sample_or_zero(s, "B_x"), sample_or_zero(s, "B_y"), sample_or_zero(s, "B_z")),
          s.c};
}

PotentialAState initial_potential(const Scenario& s) {
  bool explicit_a = false;
  for (const auto& [key, e] : s.initial.fields) explicit_a = explicit_a || key.rfind("A_", 0) == 0;
  if (explicit_a) {
    for (const auto& [key, e] : s.initial.fields) {
      if (key[0] == 'E' || key[0] == 'B') {
        throw InvalidArgument("initial: give either A fields or E/B fields, not both");
      }
    }
    if (s.initial.noise > 0.0) throw InvalidArgument("initial.noise is not supported for Maxwell kinds");
    return {VectorField3(sample_or_zero(s, "A_x"), sample_or_zero(s, "A_y"), sample_or_zero(s, "A_z")),
            VectorField3(sample_or_zero(s, "A_dot_x"), sample_or_zero(s, "A_dot_y"),
                         sample_or_zero(s, "A_dot_z")),
            s.c};
  }
  const EMState f = initial_fields(s);
  return {curl_inverse(f.B), (-s.c) * f.E, s.c};
}

RunResult run_scenario(const Scenario& s, const RunOptions& options) {
  RunResult result;
  result.directory = options.out_root / s.name;
  try {
    fs::create_directories(result.directory);
    switch (s.kind) {
      case Kind::schrodinger:
        run_schrodinger(s, result.directory, result);
        break;
      case Kind::phi:
        run_phi(s, result.directory, result);
        break;
      case Kind::maxwell_fields:
        run_maxwell_fields(s, result.directory, result);
        break;
      case Kind::maxwell_potential:
        run_maxwell_potential(s, result.directory, result);
        break;
      case Kind::reconstruct_phi:
        run_reconstruct_phi(s, options, result.directory, result);
        break;
      case Kind::reconstruct_A:
        run_reconstruct_A(s, options, result.directory, result);
        break;
      case Kind::compare:
        run_compare(s, options, result.directory, result);
        break;
    }
    if (!result.violations.empty()) {
      result.exit_code = exit_status::invariant;
      if (result.message.empty()) result.message = result.violations.front();
    } else if (result.message.empty()) {
      result.message = "ok";
    }
  } catch (const InvalidArgument& e) {
    result.exit_code = exit_status::config;
    result.message = e.what();
  } catch (const NumericalError& e) {
    result.exit_code = exit_status::numerical;
    result.message = e.what();
  } catch (const InvariantViolation& e) {
    result.exit_code = exit_status::invariant;
    result.message = e.what();
  } catch (const fs::filesystem_error& e) {
    result.exit_code = exit_status::config;
    result.message = e.what();
  } catch (const std::exception& e) {
    result.exit_code = exit_status::numerical;
    result.message = e.what();
  }
  return result;
}

std::vector<RunResult> run_suite(const std::vector<Scenario>& scenarios, const RunOptions& options,
                                 int threads) {
  std::vector<RunResult> results(scenarios.size());
  const int workers = std::max(1, threads);
  for (int st = 0; st <= 2; ++st) {
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      if (stage(scenarios[i].kind) == st) queue.push_back(i);
    }
    std::mutex lock;
    std::size_t next = 0;
    auto work = [&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> g(lock);
          if (next == queue.size()) return;
          i = queue[next++];
        }
        results[i] = run_scenario(scenarios[i], options);
      }
    };
    if (workers == 1) {
      work();
      continue;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return results;
}

}  // namespace phisim
