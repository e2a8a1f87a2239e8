#pragma once

#include "phisim/schrodinger.hpp"

// The real wave-function potential phi. With L = (hbar^2/2m) Lap - V it obeys
//
//   hbar^2 phi'' + L^2 phi = 0,
//
// and generates the wave function Psi = -L phi + i hbar phi'. The conjugate
// momentum of phi is hbar * phi_dot.
namespace phisim {

struct PhiState {
  ScalarField phi;
  ScalarField phi_dot;
  QuantumParams params;
  PotentialSpec V;

  const Grid& grid() const { return phi.grid; }
  /// Throws unless phi, phi_dot and V share one grid and samples are finite.
  void validate() const;
};

struct EnergyDensityField {
  ScalarField total;
  ScalarField kinetic;    // (hbar/2) phi_dot^2
  ScalarField potential;  // (1/2hbar) (L phi)^2
};

/// -(1/hbar^2) L(L phi).
ScalarField phi_acceleration(const PhiState& s);

/// Upper bound on |E| over the spectrum of the discrete H:
/// (hbar^2/2m) rho(Lap) + max(0, max V) - min(0, min V).
double max_energy(const PotentialSpec& V, const QuantumParams& params);

/// Hard velocity-Verlet stability limit 2 hbar / E_max.
double verlet_stability_limit(const PotentialSpec& V, const QuantumParams& params);

/// safety * 2 hbar / E_max.
double stable_dt(const PotentialSpec& V, const QuantumParams& params, double safety = 0.2);

/// One kick-drift-kick step. Refuses dt beyond verlet_stability_limit.
PhiState verlet_step(const PhiState& s, double dt);

/// Velocity-Verlet stepper that reuses the end-of-step acceleration as the
/// next step's first kick. The position and velocity updates use compensated
/// summation, so long runs agree with repeated verlet_step to roundoff
/// rather than bitwise.
class PhiVerlet {
 public:
  PhiVerlet(PhiState initial, double dt);

  void step();
  const PhiState& state() const { return state_; }
  double dt() const { return dt_; }

 private:
  PhiState state_;
  double dt_;
  ScalarField acceleration_;
  Eigen::ArrayXd phi_carry_;
  Eigen::ArrayXd phi_dot_carry_;
};

/// Psi = -L phi + i hbar phi_dot.
WaveFunction to_wavefunction(const PhiState& s);

/// Closed-form phi for the stationary state psi_n e^{-i E_n t / hbar}:
/// phi = (psi_n / E_n) cos(E_n t / hbar), phi_dot = -(psi_n / hbar) sin(E_n t / hbar).
/// Throws when |E_n| <= 1e-12 E_max: zero-energy states are pure gauge.
PhiState stationary_phi(const ScalarField& psi_n, double energy, double t,
                        const QuantumParams& params, const PotentialSpec& V);

EnergyDensityField energy_density(const PhiState& s);

/// (hbar/2) phi_dot^2 - (1/2hbar) (L phi)^2.
ScalarField lagrangian_density(const PhiState& s);

/// phi -> phi + alpha for alpha in the kernel of L. Throws InvalidArgument,
/// quoting the residual, unless ||L alpha|| <= 1e-10 ||alpha|| E_max.
PhiState gauge_shift(const PhiState& s, const ScalarField& alpha);

}  // namespace phisim
