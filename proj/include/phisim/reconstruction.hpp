#pragma once

#include <string>
#include <vector>

#include "phisim/maxwell.hpp"
#include "phisim/phi_field.hpp"

// Inverse maps: a wave-function potential from a recorded Schroedinger
// trajectory, and a vector potential from a recorded (E, B) trajectory.
namespace phisim {

struct QuantumTrajectory {
  std::vector<double> times;
  std::vector<ComplexField> psi;
  QuantumParams params;
};

struct FieldTrajectory {
  std::vector<double> times;
  std::vector<EMState> fields;
};

/// Checks times start at 0, hold at least two samples and are uniform:
/// |t_i - i dt| <= 1e-12 t_last. Returns dt.
double require_uniform_times(const std::vector<double>& times);

struct EllipticOptions {
  /// Internal target for ||L C - rhs|| / ||rhs||; the contract is 1e-10.
  double tolerance = 1e-12;
  int max_iterations = 5000;
};

struct EllipticReport {
  std::string method;  // "fourier", "pcg" or "minres"
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Solves L C = rhs with L = (hbar^2/2m) Lap - V, i.e. H C = -rhs.
///
/// Constant V: exact division in Fourier space. Bins with |E_k| <= 1e-10 E_max
/// are zero modes; rhs must be orthogonal to them within 1e-10 relative
/// ("incompatible right-hand side" otherwise) and C gets no component there.
/// Non-constant V >= 0: preconditioned CG. Otherwise preconditioned MINRES.
/// The preconditioner is the Fourier inverse of the kinetic term plus the
/// mean potential.
ScalarField solve_elliptic(const PotentialSpec& V, const ScalarField& rhs,
                           const QuantumParams& params, const EllipticOptions& options = {},
                           EllipticReport* report = nullptr);

/// Cumulative composite trapezoid rule: out[0] = 0,
/// out[i] = out[i-1] + dt (f[i-1] + f[i]) / 2.
std::vector<Eigen::ArrayXd> time_integrate(const std::vector<Eigen::ArrayXd>& samples, double dt);

struct PhiTrajectory {
  std::vector<double> times;
  std::vector<PhiState> states;
  EllipticReport elliptic;
};

/// phi(t) = (1/hbar) int_0^t Im Psi + C with L C = -Re Psi(0); phi_dot = Im Psi / hbar.
PhiTrajectory reconstruct_phi(const QuantumTrajectory& traj, const PotentialSpec& V,
                              const EllipticOptions& options = {});

/// Divergence-free, zero-mean K with curl K = B0:
/// K_k = i k x B0_k / |k|^2 with the backend derivative symbols.
/// Rejects B0 with ||div B0||_inf > 1e-10 k_max ||B0||_inf or a mean
/// component above 1e-12 ||B0||_inf.
VectorField3 curl_inverse(const VectorField3& B0);

struct ATrajectory {
  std::vector<double> times;
  std::vector<PotentialAState> states;
};

/// A(t) = -c int_0^t E + K with curl K = B(0); A_dot = -c E.
ATrajectory reconstruct_A(const FieldTrajectory& traj);

}  // namespace phisim
