#include "phisim/schrodinger.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "phisim/linear_solvers.hpp"
#include "phisim/operators.hpp"
#include "phisim/spectral.hpp"

namespace phisim {
namespace {

const std::complex<double> kI(0.0, 1.0);

double kinetic_prefactor(const QuantumParams& p) { return p.hbar * p.hbar / (2.0 * p.mass); }

}  // namespace

void QuantumParams::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InvalidArgument("hbar must be positive");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw InvalidArgument("mass must be positive");
}

PotentialSpec::PotentialSpec(ScalarField samples, std::optional<expr::Expression> e)
    : expression_(std::move(e)), sampled_(std::move(samples)) {
  if (!sampled_.all_finite()) throw InvalidArgument("potential has non-finite samples");
  min_ = sampled_.values.minCoeff();
  max_ = sampled_.values.maxCoeff();
}

PotentialSpec PotentialSpec::from_expression(const expr::Expression& e, const Grid& grid,
                                             const expr::Bindings& bindings) {
  if (e.references("t")) {
    throw InvalidArgument("potential '" + e.source() +
                          "' depends on t; only time-independent potentials are supported");
  }
  return PotentialSpec(expr::sample(e, grid, bindings, 0.0), e);
}

PotentialSpec PotentialSpec::from_samples(ScalarField samples) {
  return PotentialSpec(std::move(samples));
}

PotentialSpec PotentialSpec::zero(const Grid& grid) { return PotentialSpec(ScalarField(grid)); }

bool PotentialSpec::is_constant() const { return max_ == min_; }

ScalarField apply_wave_operator(const ScalarField& f, const PotentialSpec& V,
                                const QuantumParams& params) {
  require_same_grid(f.grid, V.grid(), "wave operator");
  return ScalarField(f.grid, kinetic_prefactor(params) * laplacian(f).values -
                                 V.sampled().values * f.values);
}

ComplexField apply_hamiltonian(const WaveFunction& psi, const PotentialSpec& V) {
  require_same_grid(psi.psi.grid, V.grid(), "apply_hamiltonian");
  const double kin = kinetic_prefactor(psi.params);
  return ComplexField(psi.psi.grid, -kin * laplacian(psi.psi).values +
                                        V.sampled().values * psi.psi.values);
}

PartsRate canonical_rhs(const ScalarField& re, const ScalarField& im, const PotentialSpec& V,
                        const QuantumParams& params) {
  require_same_grid(re.grid, im.grid, "canonical_rhs");
  const double inv_hbar = 1.0 / params.hbar;
  return {-inv_hbar * apply_wave_operator(im, V, params),
          inv_hbar * apply_wave_operator(re, V, params)};
}

PartsRate generalized_rhs(const ScalarField& re, const ScalarField& im, const PotentialSpec& V,
                          const QuantumParams& params) {
  require_same_grid(re.grid, im.grid, "generalized_rhs");
  // Functional derivatives of the discrete H' = (1/2hbar) sum (re^2 + im^2) dV,
  // per unit cell volume.
  const double dv = re.grid.cell_volume();
  const ScalarField dh_dre(re.grid, (re.values * dv / params.hbar) / dv);
  const ScalarField dh_dim(im.grid, (im.values * dv / params.hbar) / dv);
  // Bracket block {re, im}' = -L delta; its antisymmetric partner
  // {im, re}' = +L^T delta, and L^T = L for the self-adjoint discrete L.
  return {-apply_wave_operator(dh_dim, V, params), apply_wave_operator(dh_dre, V, params)};
}

double hamiltonian_canonical(const ScalarField& re, const ScalarField& im,
                             const PotentialSpec& V, const QuantumParams& params) {
  require_same_grid(re.grid, im.grid, "hamiltonian_canonical");
  require_same_grid(re.grid, V.grid(), "hamiltonian_canonical");
  const double kinetic = kinetic_prefactor(params) * (gradient_energy(re) + gradient_energy(im));
  const double potential =
      (V.sampled().values * (re.values.square() + im.values.square())).sum() *
      re.grid.cell_volume();
  return (kinetic + potential) / (2.0 * params.hbar);
}

double norm_functional(const WaveFunction& psi) {
  return psi.psi.values.abs2().sum() * psi.psi.grid.cell_volume() / (2.0 * psi.params.hbar);
}

WaveFunction crank_nicolson_step(const WaveFunction& psi, const PotentialSpec& V, double dt,
                                 const CrankNicolsonOptions& options,
                                 CrankNicolsonReport* report) {
  if (!(dt > 0.0)) throw InvalidArgument("Crank-Nicolson step needs dt > 0");
  const Grid& grid = psi.psi.grid;
  require_same_grid(grid, V.grid(), "crank_nicolson_step");

  const double tau = dt / (2.0 * psi.params.hbar);
  const double kin = kinetic_prefactor(psi.params);
  const Eigen::ArrayXd& v = V.sampled().values;

  auto apply_h = [&](const Eigen::ArrayXcd& x) -> Eigen::ArrayXcd {
    return -kin * laplacian(ComplexField(grid, x)).values + v * x;
  };
  // Normal equations of A = 1 + i tau H: (1 + tau^2 H^2) x = (1 - i tau H) b.
  auto apply_normal = [&](const Eigen::ArrayXcd& x) -> Eigen::ArrayXcd {
    return x + tau * tau * apply_h(apply_h(x));
  };
  const double v_ref = v.mean();
  const Eigen::ArrayXd symbol = kin * spectral::laplacian_symbol(grid) + v_ref;
  const Eigen::ArrayXd precond = 1.0 / (1.0 + tau * tau * symbol.square());
  auto apply_m_inv = [&](const Eigen::ArrayXcd& r) -> Eigen::ArrayXcd {
    Eigen::ArrayXcd c = spectral::forward(grid, r);
    c *= precond;
    return spectral::inverse(grid, c);
  };

  const Eigen::ArrayXcd& x0 = psi.psi.values;
  const Eigen::ArrayXcd b = x0 - kI * tau * apply_h(x0);
  const Eigen::ArrayXcd normal_rhs = b - kI * tau * apply_h(b);
  const double b_norm = linear::norm(b);

  WaveFunction out{ComplexField(grid), psi.params};
  if (b_norm == 0.0) return out;

  // Singular values of A are >= 1, so ||A^* r|| <= tol ||b|| bounds ||r|| too.
  Eigen::ArrayXcd x = x0;
  int iterations = 0;
  double relative = 0.0;
  for (int restart = 0; restart < 3; ++restart) {
    auto result = linear::pcg(apply_normal, apply_m_inv, normal_rhs, x,
                              options.tolerance * b_norm, options.max_iterations - iterations);
    iterations += result.iterations;
    x = std::move(result.x);
    const Eigen::ArrayXcd residual = b - (x + kI * tau * apply_h(x));
    relative = linear::norm(residual) / b_norm;
    if (relative <= options.tolerance) break;
    if (!result.converged && iterations >= options.max_iterations) break;
  }
  if (report) {
    report->iterations = iterations;
    report->relative_residual = relative;
  }
  if (relative > std::max(options.tolerance, 1e-12)) {
    throw NumericalError("Crank-Nicolson solve did not converge: relative residual " +
                         std::to_string(relative) + " after " + std::to_string(iterations) +
                         " iterations");
  }
  out.psi.values = std::move(x);
  return out;
}

DenseSpectrum::DenseSpectrum(const PotentialSpec& V, const QuantumParams& params)
    : grid_(V.grid()), params_(params) {
  const std::size_t n = grid_.size();
  if (n > kMaxDenseSize) {
    throw InvalidArgument("dense diagonalization limited to " + std::to_string(kMaxDenseSize) +
                          " grid points, grid has " + std::to_string(n));
  }
  params.validate();
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd h(size, size);
  const double kin = kinetic_prefactor(params);
  ScalarField unit(grid_);
  for (Eigen::Index j = 0; j < size; ++j) {
    unit.values.setZero();
    unit.values[j] = 1.0;
    h.col(j) = (-kin * laplacian(unit).values).matrix();
    h(j, j) += V.sampled().values[j];
  }
  const Eigen::MatrixXd symmetric = 0.5 * (h + h.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
  if (solver.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  energies_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
  for (Eigen::Index c = 0; c < size; ++c) {
    Eigen::Index at = 0;
    vectors_.col(c).cwiseAbs().maxCoeff(&at);
    if (vectors_(at, c) < 0.0) vectors_.col(c) *= -1.0;
  }
}

Eigenpair DenseSpectrum::pair(std::size_t n) const {
  if (n >= size()) throw InvalidArgument("eigenpair index out of range");
  const auto c = static_cast<Eigen::Index>(n);
  const double scale = 1.0 / std::sqrt(grid_.cell_volume());
  return {energies_[c], ScalarField(grid_, vectors_.col(c).array() * scale)};
}

ComplexField DenseSpectrum::propagate(const ComplexField& psi, double t) const {
  require_same_grid(psi.grid, grid_, "dense propagation");
  const Eigen::VectorXd re = psi.values.real().matrix();
  const Eigen::VectorXd im = psi.values.imag().matrix();
  const Eigen::VectorXd c_re = vectors_.transpose() * re;
  const Eigen::VectorXd c_im = vectors_.transpose() * im;
  Eigen::VectorXd p_re(c_re.size()), p_im(c_re.size());
  for (Eigen::Index n = 0; n < c_re.size(); ++n) {
    const std::complex<double> c =
        std::complex<double>(c_re[n], c_im[n]) * std::exp(-kI * (energies_[n] * t / params_.hbar));
    p_re[n] = c.real();
    p_im[n] = c.imag();
  }
  ComplexField out(grid_);
  out.values.real() = (vectors_ * p_re).array();
  out.values.imag() = (vectors_ * p_im).array();
  return out;
}

WaveFunction exact_propagate_small(const WaveFunction& psi, const PotentialSpec& V, double t) {
  const DenseSpectrum spectrum(V, psi.params);
  return {spectrum.propagate(psi.psi, t), psi.params};
}

std::vector<Eigenpair> eigenpairs_small(const PotentialSpec& V, const QuantumParams& params,
                                        std::size_t count) {
  const DenseSpectrum spectrum(V, params);
  if (count > spectrum.size()) throw InvalidArgument("requested more eigenpairs than grid points");
  std::vector<Eigenpair> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) out.push_back(spectrum.pair(n));
  return out;
}

}  // namespace phisim
