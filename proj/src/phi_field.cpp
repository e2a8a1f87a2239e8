#include "phisim/phi_field.hpp"

#include <cmath>
#include <sstream>

#include "phisim/operators.hpp"

namespace phisim {

void PhiState::validate() const {
  require_same_grid(phi.grid, phi_dot.grid, "phi state");
  require_same_grid(phi.grid, V.grid(), "phi state potential");
  params.validate();
  if (!phi.all_finite() || !phi_dot.all_finite()) {
    throw NumericalError("phi state has non-finite samples");
  }
}

ScalarField phi_acceleration(const PhiState& s) {
  const ScalarField l_phi = apply_wave_operator(s.phi, s.V, s.params);
  return (-1.0 / (s.params.hbar * s.params.hbar)) * apply_wave_operator(l_phi, s.V, s.params);
}

double max_energy(const PotentialSpec& V, const QuantumParams& params) {
  const double kin = params.hbar * params.hbar / (2.0 * params.mass);
  return kin * laplacian_spectral_radius(V.grid()) + std::max(0.0, V.max()) -
         std::min(0.0, V.min());
}

double verlet_stability_limit(const PotentialSpec& V, const QuantumParams& params) {
  return 2.0 * params.hbar / max_energy(V, params);
}

double stable_dt(const PotentialSpec& V, const QuantumParams& params, double safety) {
  if (!(safety > 0.0)) throw InvalidArgument("stability safety factor must be positive");
  return safety * verlet_stability_limit(V, params);
}

namespace {

void check_step(const PhiState& s, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("Verlet step needs dt > 0");
  const double limit = verlet_stability_limit(s.V, s.params);
  if (dt > limit) {
    std::ostringstream os;
    os << "dt = " << dt << " exceeds the Verlet stability limit 2*hbar/E_max = " << limit
       << " (E_max = " << max_energy(s.V, s.params) << ")";
    throw NumericalError(os.str());
  }
}

}  // namespace

PhiState verlet_step(const PhiState& s, double dt) {
  PhiVerlet stepper(s, dt);
  stepper.step();
  return stepper.state();
}

PhiVerlet::PhiVerlet(PhiState initial, double dt)
    : state_(std::move(initial)), dt_(dt), acceleration_(state_.grid()) {
  state_.validate();
  check_step(state_, dt_);
  acceleration_ = phi_acceleration(state_);
  phi_carry_ = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(state_.grid().size()));
  phi_dot_carry_ = phi_carry_;
}

namespace {

// Kahan update sum += increment, carrying the lost low-order bits.
void compensated_add(Eigen::ArrayXd& sum, Eigen::ArrayXd& carry, const Eigen::ArrayXd& increment) {
  for (Eigen::Index i = 0; i < sum.size(); ++i) {
    const double y = increment[i] - carry[i];
    const double t = sum[i] + y;
    carry[i] = (t - sum[i]) - y;
    sum[i] = t;
  }
}

}  // namespace

void PhiVerlet::step() {
  const double half = 0.5 * dt_;
  compensated_add(state_.phi_dot.values, phi_dot_carry_, half * acceleration_.values);
  compensated_add(state_.phi.values, phi_carry_, dt_ * state_.phi_dot.values);
  acceleration_ = phi_acceleration(state_);
  compensated_add(state_.phi_dot.values, phi_dot_carry_, half * acceleration_.values);
}

WaveFunction to_wavefunction(const PhiState& s) {
  const ScalarField re = -apply_wave_operator(s.phi, s.V, s.params);
  const ScalarField im = s.params.hbar * s.phi_dot;
  return {ComplexField(re, im), s.params};
}

PhiState stationary_phi(const ScalarField& psi_n, double energy, double t,
                        const QuantumParams& params, const PotentialSpec& V) {
  require_same_grid(psi_n.grid, V.grid(), "stationary_phi");
  const double e_max = max_energy(V, params);
  if (!(std::abs(energy) > 1e-12 * e_max)) {
    throw InvalidArgument("stationary_phi needs a nonzero energy; |E| = " +
                          std::to_string(std::abs(energy)) +
                          " lies in the gauge sector of zero-energy states");
  }
  const double phase = energy * t / params.hbar;
  return {(std::cos(phase) / energy) * psi_n, (-std::sin(phase) / params.hbar) * psi_n, params,
          V};
}

EnergyDensityField energy_density(const PhiState& s) {
  const ScalarField l_phi = apply_wave_operator(s.phi, s.V, s.params);
  ScalarField kinetic(s.grid(), 0.5 * s.params.hbar * s.phi_dot.values.square());
  ScalarField potential(s.grid(), l_phi.values.square() / (2.0 * s.params.hbar));
  ScalarField total = kinetic + potential;
  return {std::move(total), std::move(kinetic), std::move(potential)};
}

ScalarField lagrangian_density(const PhiState& s) {
  const EnergyDensityField e = energy_density(s);
  return e.kinetic - e.potential;
}

PhiState gauge_shift(const PhiState& s, const ScalarField& alpha) {
  require_same_grid(s.grid(), alpha.grid, "gauge_shift");
  const double residual = l2_norm(apply_wave_operator(alpha, s.V, s.params));
  const double bound = 1e-10 * l2_norm(alpha) * max_energy(s.V, s.params);
  if (residual > bound) {
    std::ostringstream os;
    os << "gauge function is not in the kernel of (hbar^2/2m) Lap - V: ||L alpha|| = "
       << residual << " exceeds " << bound;
    throw InvalidArgument(os.str());
  }
  PhiState out = s;
  out.phi = s.phi + alpha;
  return out;
}

}  // namespace phisim
