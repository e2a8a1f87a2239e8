#pragma once

#include <optional>
#include <utility>

#include "phisim/expr.hpp"
#include "phisim/grid.hpp"

// Electromagnetic fields on a collocated periodic 3D grid, Gaussian-like
// units with explicit c:
//
//   dE/dt = c curl B - J,   dB/dt = -c curl E,
//
// with div E = rho and div B = 0 imposed only at t = 0. The vector potential
// in the temporal gauge obeys A'' = -c^2 curl curl A + c J and maps to
// B = curl A, E = -A' / c.
namespace phisim {

struct EMState {
  VectorField3 E;
  VectorField3 B;
  double c = 1.0;

  const Grid& grid() const { return E.grid(); }
  void validate() const;
};

struct PotentialAState {
  VectorField3 A;
  VectorField3 A_dot;
  double c = 1.0;

  const Grid& grid() const { return A.grid(); }
  void validate() const;
};

/// Charge and current densities given as expressions in t, x, y, z.
class SourceSpec {
 public:
  /// rho = 0, J = 0.
  SourceSpec() = default;
  SourceSpec(expr::Expression rho, std::array<expr::Expression, 3> J,
             expr::Bindings constants = {});

  bool is_vacuum() const { return !rho_; }
  /// True when neither rho nor J references t.
  bool is_static() const;

  ScalarField rho(const Grid& grid, double t) const;
  VectorField3 J(const Grid& grid, double t) const;

  /// ||d rho/dt + div J||_inf at time t, with d rho/dt from the five-point
  /// centered difference of step h = dt / 100.
  struct Continuity {
    double residual = 0.0;
    double scale = 0.0;   // max(||d rho/dt||_inf, ||div J||_inf)
    double floor = 0.0;   // roundoff level of the residual itself
    bool ok = true;
  };
  Continuity continuity(const Grid& grid, double t, double dt) const;

  /// Throws InvalidArgument unless residual <= 1e-8 scale + floor at every
  /// time in times. The floor is 64 eps (k_max ||J|| + ||rho|| / h).
  void require_continuity(const Grid& grid, const std::vector<double>& times, double dt) const;

 private:
  std::optional<expr::Expression> rho_;
  std::array<std::optional<expr::Expression>, 3> J_;
  expr::Bindings constants_;
};

struct EMRate {
  VectorField3 dE;
  VectorField3 dB;
};

/// (c curl B - J, -c curl E).
EMRate em_rhs(const EMState& s, const VectorField3& J);

/// Hard RK4 limit 2.8 / (c k_max); the imaginary-axis stability boundary of
/// classical RK4 is 2 sqrt(2).
double rk4_stability_limit(const Grid& grid, double c);
/// Hard velocity-Verlet limit 2 / (c k_max).
double a_verlet_stability_limit(const Grid& grid, double c);

/// Classical RK4 with J sampled at t, t + dt/2, t + dt.
EMState rk4_step(const EMState& s, const SourceSpec& sources, double t, double dt);

/// (||div E - rho||_inf, ||div B||_inf).
std::pair<double, double> constraint_residual(const EMState& s, const ScalarField& rho);

/// Relative norm of (i/c) dW/dt + curl W - J/c with W = B + iE and dW/dt
/// from em_rhs, divided by ||curl W|| + ||J|| / c (0 when both vanish).
double w_residual(const EMState& s, const SourceSpec& sources, double t);

/// -c^2 curl(curl A) + c J.
VectorField3 a_acceleration(const PotentialAState& s, const VectorField3& J);
/// c^2 (Lap A - grad div A) + c J, the expanded form of the same operator.
/// Lap is the composition sum_a d_a d_a of the backend's first derivatives.
VectorField3 a_acceleration_expanded(const PotentialAState& s, const VectorField3& J);

PotentialAState a_verlet_step(const PotentialAState& s, const SourceSpec& sources, double t,
                              double dt);

/// Velocity-Verlet stepper for A with the end-of-step acceleration cached.
class AVerlet {
 public:
  AVerlet(PotentialAState initial, SourceSpec sources, double t0, double dt);

  void step();
  const PotentialAState& state() const { return state_; }
  double time() const { return t0_ + static_cast<double>(steps_) * dt_; }

 private:
  PotentialAState state_;
  SourceSpec sources_;
  double t0_;
  double dt_;
  long steps_ = 0;
  VectorField3 acceleration_;
};

/// B = curl A, E = -A_dot / c.
EMState a_to_fields(const PotentialAState& s);

/// ||div A_dot + c rho||_inf.
double a_constraint_residual(const PotentialAState& s, const ScalarField& rho);

struct EMHamiltonians {
  double H = 0.0;        // sum [(c/2)(B.curl B + E.curl E) - B.J] dV
  double H_prime = 0.0;  // sum (c/2)(E^2 + B^2) dV
};
EMHamiltonians em_hamiltonians(const EMState& s, const VectorField3& J);

/// |A_dot|^2 / 2c^2 - |curl A|^2 / 2 + A.J / c.
ScalarField a_lagrangian_density(const PotentialAState& s, const VectorField3& J);

/// A -> A + grad alpha.
PotentialAState gauge_shift_A(const PotentialAState& s, const ScalarField& alpha);

}  // namespace phisim
