#include "phisim/maxwell.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "phisim/operators.hpp"

namespace phisim {
namespace {

void require_3d(const Grid& g, std::string_view what) {
  if (g.dims() != 3) throw InvalidArgument(std::string(what) + " needs a 3D grid");
}

void require_c(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("c must be positive");
}

VectorField3 zero_vector(const Grid& g) { return VectorField3(g); }

void check_dt(double dt, double limit, std::string_view scheme) {
  if (!(dt > 0.0)) throw InvalidArgument(std::string(scheme) + " step needs dt > 0");
  if (dt > limit) {
    std::ostringstream os;
    os << "dt = " << dt << " exceeds the " << scheme << " stability limit " << limit;
    throw NumericalError(os.str());
  }
}

}  // namespace

void EMState::validate() const {
  require_3d(E.grid(), "EM state");
  require_same_grid(E.grid(), B.grid(), "EM state");
  require_c(c);
  if (!E.all_finite() || !B.all_finite()) throw NumericalError("EM state has non-finite samples");
}

void PotentialAState::validate() const {
  require_3d(A.grid(), "vector potential");
  require_same_grid(A.grid(), A_dot.grid(), "vector potential state");
  require_c(c);
  if (!A.all_finite() || !A_dot.all_finite()) {
    throw NumericalError("vector potential has non-finite samples");
  }
}

SourceSpec::SourceSpec(expr::Expression rho, std::array<expr::Expression, 3> J,
                       expr::Bindings constants)
    : rho_(std::move(rho)), constants_(std::move(constants)) {
  for (int a = 0; a < 3; ++a) J_[a] = std::move(J[a]);
}

bool SourceSpec::is_static() const {
  if (is_vacuum()) return true;
  if (rho_->references("t")) return false;
  for (const auto& j : J_) {
    if (j->references("t")) return false;
  }
  return true;
}

ScalarField SourceSpec::rho(const Grid& grid, double t) const {
  if (is_vacuum()) return ScalarField(grid);
  return expr::sample(*rho_, grid, constants_, t);
}

VectorField3 SourceSpec::J(const Grid& grid, double t) const {
  require_3d(grid, "current density");
  if (is_vacuum()) return zero_vector(grid);
  return VectorField3(expr::sample(*J_[0], grid, constants_, t),
                      expr::sample(*J_[1], grid, constants_, t),
                      expr::sample(*J_[2], grid, constants_, t));
}

SourceSpec::Continuity SourceSpec::continuity(const Grid& grid, double t, double dt) const {
  Continuity out;
  if (is_vacuum()) return out;
  if (!(dt > 0.0)) throw InvalidArgument("continuity check needs dt > 0");
  const double h = dt / 100.0;
  const ScalarField rho_dot(
      grid, (-rho(grid, t + 2 * h).values + 8.0 * rho(grid, t + h).values -
             8.0 * rho(grid, t - h).values + rho(grid, t - 2 * h).values) /
                (12.0 * h));
  const VectorField3 j = J(grid, t);
  const ScalarField div_j = divergence(j);
  out.residual = max_abs(rho_dot + div_j);
  out.scale = std::max(max_abs(rho_dot), max_abs(div_j));
  const double eps = std::numeric_limits<double>::epsilon();
  out.floor = 64.0 * eps * (max_wavenumber(grid) * max_abs(j) + max_abs(rho(grid, t)) / h);
  out.ok = out.residual <= 1e-8 * out.scale + out.floor;
  return out;
}

void SourceSpec::require_continuity(const Grid& grid, const std::vector<double>& times,
                                    double dt) const {
  if (is_vacuum()) return;
  for (double t : times) {
    const Continuity c = continuity(grid, t, dt);
    if (!c.ok) {
      std::ostringstream os;
      os << "sources violate the continuity equation at t = " << t
         << ": ||d(rho)/dt + div J||_inf = " << c.residual << " exceeds 1e-8 * " << c.scale;
      throw InvalidArgument(os.str());
    }
    if (is_static()) return;
  }
}

EMRate em_rhs(const EMState& s, const VectorField3& J) {
  require_same_grid(s.grid(), s.B.grid(), "em_rhs");
  require_same_grid(s.grid(), J.grid(), "em_rhs current");
  return {s.c * curl(s.B) - J, -s.c * curl(s.E)};
}

double rk4_stability_limit(const Grid& grid, double c) {
  require_c(c);
  return 2.8 / (c * max_wavenumber(grid));
}

double a_verlet_stability_limit(const Grid& grid, double c) {
  require_c(c);
  return 2.0 / (c * max_wavenumber(grid));
}

EMState rk4_step(const EMState& s, const SourceSpec& sources, double t, double dt) {
  s.validate();
  check_dt(dt, rk4_stability_limit(s.grid(), s.c), "RK4");
  const Grid& g = s.grid();
  const VectorField3 j0 = sources.J(g, t);
  const VectorField3 j_half = sources.is_static() ? j0 : sources.J(g, t + 0.5 * dt);
  const VectorField3 j1 = sources.is_static() ? j0 : sources.J(g, t + dt);

  auto shifted = [&](const EMRate& k, double w) {
    return EMState{s.E + w * k.dE, s.B + w * k.dB, s.c};
  };
  const EMRate k1 = em_rhs(s, j0);
  const EMRate k2 = em_rhs(shifted(k1, 0.5 * dt), j_half);
  const EMRate k3 = em_rhs(shifted(k2, 0.5 * dt), j_half);
  const EMRate k4 = em_rhs(shifted(k3, dt), j1);
  const double w = dt / 6.0;
  EMState out = s;
  for (int a = 0; a < 3; ++a) {
    out.E[a].values += w * (k1.dE[a].values + 2.0 * k2.dE[a].values + 2.0 * k3.dE[a].values +
                            k4.dE[a].values);
    out.B[a].values += w * (k1.dB[a].values + 2.0 * k2.dB[a].values + 2.0 * k3.dB[a].values +
                            k4.dB[a].values);
  }
  return out;
}

std::pair<double, double> constraint_residual(const EMState& s, const ScalarField& rho) {
  require_same_grid(s.grid(), rho.grid, "constraint_residual");
  return {max_abs(divergence(s.E) - rho), max_abs(divergence(s.B))};
}

double w_residual(const EMState& s, const SourceSpec& sources, double t) {
  const Grid& g = s.grid();
  const VectorField3 j = sources.J(g, t);
  const EMRate rate = em_rhs(s, j);
  const VectorField3 curl_b = curl(s.B);
  const VectorField3 curl_e = curl(s.E);
  const std::complex<double> i(0.0, 1.0);
  double residual2 = 0.0, curl_w2 = 0.0;
  for (int a = 0; a < 3; ++a) {
    const Eigen::ArrayXcd dw = rate.dB[a].values.cast<std::complex<double>>() +
                               i * rate.dE[a].values.cast<std::complex<double>>();
    const Eigen::ArrayXcd curl_w = curl_b[a].values.cast<std::complex<double>>() +
                                   i * curl_e[a].values.cast<std::complex<double>>();
    const Eigen::ArrayXcd r = (i / s.c) * dw + curl_w - j[a].values / s.c;
    residual2 += r.abs2().sum();
    curl_w2 += curl_w.abs2().sum();
  }
  const double dv = g.cell_volume();
  const double scale = std::sqrt(curl_w2 * dv) + l2_norm(j) / s.c;
  return scale == 0.0 ? 0.0 : std::sqrt(residual2 * dv) / scale;
}

VectorField3 a_acceleration(const PotentialAState& s, const VectorField3& J) {
  require_same_grid(s.grid(), J.grid(), "a_acceleration");
  return (-s.c * s.c) * curl(curl(s.A)) + s.c * J;
}

VectorField3 a_acceleration_expanded(const PotentialAState& s, const VectorField3& J) {
  require_same_grid(s.grid(), J.grid(), "a_acceleration_expanded");
  // Composed Laplacian sum_a d_a d_a: the form in which the curl-curl
  // expansion is exact for every backend.
  VectorField3 lap(s.grid());
  for (int comp = 0; comp < 3; ++comp) {
    for (int a = 0; a < 3; ++a) lap[comp] = lap[comp] + partial(partial(s.A[comp], a), a);
  }
  return (s.c * s.c) * (lap - gradient(divergence(s.A))) + s.c * J;
}

PotentialAState a_verlet_step(const PotentialAState& s, const SourceSpec& sources, double t,
                              double dt) {
  AVerlet stepper(s, sources, t, dt);
  stepper.step();
  return stepper.state();
}

AVerlet::AVerlet(PotentialAState initial, SourceSpec sources, double t0, double dt)
    : state_(std::move(initial)),
      sources_(std::move(sources)),
      t0_(t0),
      dt_(dt),
      acceleration_(state_.grid()) {
  state_.validate();
  check_dt(dt_, a_verlet_stability_limit(state_.grid(), state_.c), "A-Verlet");
  acceleration_ = a_acceleration(state_, sources_.J(state_.grid(), t0_));
}

void AVerlet::step() {
  const double half = 0.5 * dt_;
  for (int a = 0; a < 3; ++a) {
    state_.A_dot[a].values += half * acceleration_[a].values;
    state_.A[a].values += dt_ * state_.A_dot[a].values;
  }
  ++steps_;
  acceleration_ = a_acceleration(state_, sources_.J(state_.grid(), time()));
  for (int a = 0; a < 3; ++a) state_.A_dot[a].values += half * acceleration_[a].values;
}

EMState a_to_fields(const PotentialAState& s) {
  return {(-1.0 / s.c) * s.A_dot, curl(s.A), s.c};
}

double a_constraint_residual(const PotentialAState& s, const ScalarField& rho) {
  require_same_grid(s.grid(), rho.grid, "a_constraint_residual");
  return max_abs(divergence(s.A_dot) + s.c * rho);
}

EMHamiltonians em_hamiltonians(const EMState& s, const VectorField3& J) {
  require_same_grid(s.grid(), J.grid(), "em_hamiltonians");
  EMHamiltonians out;
  out.H = 0.5 * s.c * (inner(s.B, curl(s.B)) + inner(s.E, curl(s.E))) - inner(s.B, J);
  out.H_prime = 0.5 * s.c * (inner(s.E, s.E) + inner(s.B, s.B));
  return out;
}

ScalarField a_lagrangian_density(const PotentialAState& s, const VectorField3& J) {
  require_same_grid(s.grid(), J.grid(), "a_lagrangian_density");
  const VectorField3 b = curl(s.A);
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(s.grid().size()));
  for (int a = 0; a < 3; ++a) {
    out += s.A_dot[a].values.square() / (2.0 * s.c * s.c) - 0.5 * b[a].values.square() +
           s.A[a].values * J[a].values / s.c;
  }
  return ScalarField(s.grid(), std::move(out));
}

PotentialAState gauge_shift_A(const PotentialAState& s, const ScalarField& alpha) {
  require_same_grid(s.grid(), alpha.grid, "gauge_shift_A");
  PotentialAState out = s;
  out.A = s.A + gradient(alpha);
  return out;
}

}  // namespace phisim
