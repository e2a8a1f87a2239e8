#include "phisim/reconstruction.hpp"

#include <cmath>
#include <sstream>

#include "phisim/linear_solvers.hpp"
#include "phisim/operators.hpp"
#include "phisim/spectral.hpp"

namespace phisim {

double require_uniform_times(const std::vector<double>& times) {
  if (times.size() < 2) throw InvalidArgument("trajectory needs at least two samples");
  if (times.front() != 0.0) throw InvalidArgument("trajectory must start at t = 0");
  const double t_last = times.back();
  const double dt = t_last / static_cast<double>(times.size() - 1);
  if (!(dt > 0.0)) throw InvalidArgument("trajectory times must increase");
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double expected = static_cast<double>(i) * dt;
    if (std::abs(times[i] - expected) > 1e-12 * t_last) {
      std::ostringstream os;
      os << "trajectory times are not uniform: t[" << i << "] = " << times[i] << ", expected "
         << expected;
      throw InvalidArgument(os.str());
    }
  }
  return dt;
}

namespace {

double kinetic_prefactor(const QuantumParams& p) { return p.hbar * p.hbar / (2.0 * p.mass); }

ScalarField solve_fourier(const PotentialSpec& V, const ScalarField& rhs,
                          const QuantumParams& params, EllipticReport& report) {
  const Grid& grid = rhs.grid;
  const Eigen::ArrayXd energy =
      kinetic_prefactor(params) * spectral::laplacian_symbol(grid) + V.min();
  const double threshold = 1e-10 * max_energy(V, params);
  Eigen::ArrayXcd c = spectral::forward(grid, rhs.values);
  const double total = c.abs2().sum();
  double kernel = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    if (std::abs(energy[k]) <= threshold) {
      kernel += std::norm(c[k]);
      c[k] = 0.0;
    } else {
      c[k] /= -energy[k];
    }
  }
  if (kernel > 1e-20 * total) {
    std::ostringstream os;
    os << "incompatible right-hand side: relative component along the zero modes is "
       << std::sqrt(kernel / total);
    throw InvalidArgument(os.str());
  }
  report.method = "fourier";
  return ScalarField(grid, spectral::inverse_real(grid, c));
}

}  // namespace

ScalarField solve_elliptic(const PotentialSpec& V, const ScalarField& rhs,
                           const QuantumParams& params, const EllipticOptions& options,
                           EllipticReport* report) {
  require_same_grid(V.grid(), rhs.grid, "solve_elliptic");
  params.validate();
  if (!rhs.all_finite()) throw InvalidArgument("elliptic right-hand side is not finite");
  const Grid& grid = rhs.grid;
  EllipticReport local;
  EllipticReport& rep = report ? *report : local;
  rep = {};

  const double rhs_norm = linear::norm(rhs.values);
  if (rhs_norm == 0.0) {
    rep.method = V.is_constant() ? "fourier" : (V.min() >= 0.0 ? "pcg" : "minres");
    return ScalarField(grid);
  }

  ScalarField solution(grid);
  if (V.is_constant()) {
    solution = solve_fourier(V, rhs, params, rep);
  } else {
    const double kin = kinetic_prefactor(params);
    const Eigen::ArrayXd& v = V.sampled().values;
    auto apply_h = [&](const Eigen::ArrayXd& x) -> Eigen::ArrayXd {
      return -kin * laplacian(ScalarField(grid, x)).values + v * x;
    };
    const double shift = V.min() >= 0.0 ? v.mean() : v.abs().mean();
    const Eigen::ArrayXd precond = 1.0 / (kin * spectral::laplacian_symbol(grid) + shift);
    auto apply_m_inv = [&](const Eigen::ArrayXd& r) -> Eigen::ArrayXd {
      Eigen::ArrayXcd c = spectral::forward(grid, r);
      c *= precond;
      return spectral::inverse_real(grid, c);
    };
    const Eigen::ArrayXd b = -rhs.values;
    const Eigen::ArrayXd x0 = Eigen::ArrayXd::Zero(b.size());
    const double tol = options.tolerance * rhs_norm;
    linear::SolveResult<Eigen::ArrayXd> result;
    if (V.min() >= 0.0) {
      rep.method = "pcg";
      result = linear::pcg(apply_h, apply_m_inv, b, x0, tol, options.max_iterations);
    } else {
      rep.method = "minres";
      result = linear::pminres(apply_h, apply_m_inv, b, x0, tol, options.max_iterations);
    }
    rep.iterations = result.iterations;
    solution = ScalarField(grid, std::move(result.x));
  }

  const ScalarField residual = apply_wave_operator(solution, V, params) - rhs;
  rep.relative_residual = linear::norm(residual.values) / rhs_norm;
  if (!(rep.relative_residual <= std::max(options.tolerance, 1e-10))) {
    std::ostringstream os;
    os << "elliptic solve (" << rep.method << ") stopped at relative residual "
       << rep.relative_residual << " after " << rep.iterations << " iterations";
    throw NumericalError(os.str());
  }
  return solution;
}

std::vector<Eigen::ArrayXd> time_integrate(const std::vector<Eigen::ArrayXd>& samples,
                                           double dt) {
  if (samples.empty()) throw InvalidArgument("time_integrate needs at least one sample");
  if (!(dt > 0.0)) throw InvalidArgument("time_integrate needs dt > 0");
  std::vector<Eigen::ArrayXd> out;
  out.reserve(samples.size());
  out.push_back(Eigen::ArrayXd::Zero(samples.front().size()));
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].size() != samples[0].size()) {
      throw GridMismatch("time_integrate samples differ in size");
    }
    out.push_back(out.back() + (0.5 * dt) * (samples[i - 1] + samples[i]));
  }
  return out;
}

PhiTrajectory reconstruct_phi(const QuantumTrajectory& traj, const PotentialSpec& V,
                              const EllipticOptions& options) {
  if (traj.psi.size() != traj.times.size()) {
    throw InvalidArgument("trajectory has mismatched times and snapshots");
  }
  const double dt = require_uniform_times(traj.times);
  for (const auto& psi : traj.psi) require_same_grid(psi.grid, V.grid(), "reconstruct_phi");
  const QuantumParams& params = traj.params;
  const Grid& grid = V.grid();

  PhiTrajectory out;
  out.times = traj.times;
  const ScalarField c =
      solve_elliptic(V, -traj.psi.front().real(), params, options, &out.elliptic);

  std::vector<Eigen::ArrayXd> p;
  p.reserve(traj.psi.size());
  for (const auto& psi : traj.psi) p.push_back(psi.values.imag());
  const std::vector<Eigen::ArrayXd> integral = time_integrate(p, dt);

  const double inv_hbar = 1.0 / params.hbar;
  out.states.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.states.push_back(PhiState{ScalarField(grid, c.values + inv_hbar * integral[i]),
                                  ScalarField(grid, inv_hbar * p[i]), params, V});
  }
  return out;
}

VectorField3 curl_inverse(const VectorField3& B0) {
  const Grid& grid = B0.grid();
  if (grid.dims() != 3) throw InvalidArgument("curl_inverse needs a 3D grid");
  const double b_max = max_abs(B0);
  if (b_max == 0.0) return VectorField3(grid);

  const double div_max = max_abs(divergence(B0));
  if (div_max > 1e-10 * max_wavenumber(grid) * b_max) {
    std::ostringstream os;
    os << "magnetic field is not solenoidal: ||div B||_inf = " << div_max;
    throw InvalidArgument(os.str());
  }
  for (int a = 0; a < 3; ++a) {
    const double mean = B0[a].values.mean();
    if (std::abs(mean) > 1e-12 * b_max) {
      std::ostringstream os;
      os << "magnetic field has a nonzero mean component " << mean << " along axis " << a
         << "; a uniform field has no periodic vector potential";
      throw InvalidArgument(os.str());
    }
  }

  std::array<Eigen::ArrayXcd, 3> b;
  for (int a = 0; a < 3; ++a) b[a] = spectral::forward(grid, B0[a].values);
  const std::array<const Eigen::ArrayXd*, 3> k = {&spectral::derivative_symbol(grid, 0),
                                                  &spectral::derivative_symbol(grid, 1),
                                                  &spectral::derivative_symbol(grid, 2)};
  const Eigen::Index n = b[0].size();
  std::array<Eigen::ArrayXcd, 3> kk;
  for (auto& c : kk) c = Eigen::ArrayXcd::Zero(n);
  const std::complex<double> i(0.0, 1.0);
  for (Eigen::Index m = 0; m < n; ++m) {
    const double kx = (*k[0])[m], ky = (*k[1])[m], kz = (*k[2])[m];
    const double k2 = kx * kx + ky * ky + kz * kz;
    if (k2 == 0.0) continue;
    kk[0][m] = i * (ky * b[2][m] - kz * b[1][m]) / k2;
    kk[1][m] = i * (kz * b[0][m] - kx * b[2][m]) / k2;
    kk[2][m] = i * (kx * b[1][m] - ky * b[0][m]) / k2;
  }
  VectorField3 out(grid);
  for (int a = 0; a < 3; ++a) out[a].values = spectral::inverse_real(grid, kk[a]);

  const double residual = l2_norm(curl(out) - B0);
  if (residual > 1e-10 * l2_norm(B0)) {
    std::ostringstream os;
    os << "curl inverse residual " << residual
       << " too large; B0 has content in modes the discrete curl cannot reach";
    throw NumericalError(os.str());
  }
  return out;
}

ATrajectory reconstruct_A(const FieldTrajectory& traj) {
  if (traj.fields.size() != traj.times.size()) {
    throw InvalidArgument("trajectory has mismatched times and snapshots");
  }
  const double dt = require_uniform_times(traj.times);
  const EMState& first = traj.fields.front();
  first.validate();
  const Grid& grid = first.grid();
  const double c = first.c;
  for (const auto& s : traj.fields) {
    require_same_grid(s.grid(), grid, "reconstruct_A");
    if (s.c != c) throw InvalidArgument("trajectory snapshots disagree on c");
  }

  const VectorField3 k = curl_inverse(first.B);
  ATrajectory out;
  out.times = traj.times;
  std::array<std::vector<Eigen::ArrayXd>, 3> integral;
  for (int a = 0; a < 3; ++a) {
    std::vector<Eigen::ArrayXd> e;
    e.reserve(traj.fields.size());
    for (const auto& s : traj.fields) e.push_back(s.E[a].values);
    integral[a] = time_integrate(e, dt);
  }
  out.states.reserve(traj.fields.size());
  for (std::size_t t = 0; t < traj.fields.size(); ++t) {
    PotentialAState s{VectorField3(grid), VectorField3(grid), c};
    for (int a = 0; a < 3; ++a) {
      s.A[a].values = k[a].values - c * integral[a][t];
      s.A_dot[a].values = -c * traj.fields[t].E[a].values;
    }
    out.states.push_back(std::move(s));
  }
  return out;
}

}  // namespace phisim
