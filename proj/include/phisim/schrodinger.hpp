#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "phisim/expr.hpp"
#include "phisim/grid.hpp"

namespace phisim {

struct QuantumParams {
  double hbar = 1.0;
  double mass = 1.0;

  /// Throws InvalidArgument unless both are strictly positive and finite.
  void validate() const;
};

/// Time-independent external potential V(x), sampled on a grid.
class PotentialSpec {
 public:
  /// Rejects expressions that reference t.
  static PotentialSpec from_expression(const expr::Expression& e, const Grid& grid,
                                       const expr::Bindings& bindings);
  static PotentialSpec from_samples(ScalarField samples);
  static PotentialSpec zero(const Grid& grid);

  const ScalarField& sampled() const { return sampled_; }
  const Grid& grid() const { return sampled_.grid; }
  const std::optional<expr::Expression>& expression() const { return expression_; }

  double min() const { return min_; }
  double max() const { return max_; }
  bool is_constant() const;

 private:
  explicit PotentialSpec(ScalarField samples, std::optional<expr::Expression> e = std::nullopt);

  std::optional<expr::Expression> expression_;
  ScalarField sampled_;
  double min_ = 0.0;
  double max_ = 0.0;
};

struct WaveFunction {
  ComplexField psi;
  QuantumParams params;
};

/// (hbar^2 / 2m) Lap f - V f, i.e. -H f. This is the operator that builds
/// Re Psi from the wave-function potential.
ScalarField apply_wave_operator(const ScalarField& f, const PotentialSpec& V,
                                const QuantumParams& params);

/// H Psi = -(hbar^2 / 2m) Lap Psi + V Psi.
ComplexField apply_hamiltonian(const WaveFunction& psi, const PotentialSpec& V);

/// Time derivatives of the real and imaginary parts of Psi.
struct PartsRate {
  ScalarField d_re;
  ScalarField d_im;
};

/// Canonical Hamiltonian flow of Psi = re + i im:
///   hbar d(re)/dt = -L im,   hbar d(im)/dt = L re,   L = (hbar^2/2m) Lap - V.
PartsRate canonical_rhs(const ScalarField& re, const ScalarField& im, const PotentialSpec& V,
                        const QuantumParams& params);

/// The same flow generated by H' = (1/2 hbar) sum (re^2 + im^2) dV through the
/// non-canonical bracket {re(x), im(y)}' = -L delta(x - y).
PartsRate generalized_rhs(const ScalarField& re, const ScalarField& im, const PotentialSpec& V,
                          const QuantumParams& params);

/// H = (1/2 hbar) sum [ (hbar^2/2m)(|grad re|^2 + |grad im|^2) + V (re^2 + im^2) ] dV.
double hamiltonian_canonical(const ScalarField& re, const ScalarField& im,
                             const PotentialSpec& V, const QuantumParams& params);

/// H' = (1/2 hbar) sum |Psi|^2 dV.
double norm_functional(const WaveFunction& psi);

struct CrankNicolsonOptions {
  /// Target for ||b - A Psi'|| / ||b||; the contract is 1e-12.
  double tolerance = 1e-13;
  int max_iterations = 500;
};

struct CrankNicolsonReport {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// One Cayley step (1 + i dt H / 2hbar) Psi' = (1 - i dt H / 2hbar) Psi, solved by
/// preconditioned CG on the normal equations. Throws NumericalError when the
/// iteration cap is hit before the tolerance.
WaveFunction crank_nicolson_step(const WaveFunction& psi, const PotentialSpec& V, double dt,
                                 const CrankNicolsonOptions& options = {},
                                 CrankNicolsonReport* report = nullptr);

struct Eigenpair {
  double energy;
  ScalarField state;  // unit norm under the discrete inner product
};

/// Full eigendecomposition of the discrete H for grids of at most
/// kMaxDenseSize points. Eigenvalues ascend; each eigenvector is normalized
/// in the discrete inner product and signed so its largest-magnitude entry
/// is positive.
class DenseSpectrum {
 public:
  static constexpr std::size_t kMaxDenseSize = 4096;

  DenseSpectrum(const PotentialSpec& V, const QuantumParams& params);

  const Eigen::VectorXd& energies() const { return energies_; }
  Eigenpair pair(std::size_t n) const;
  std::size_t size() const { return static_cast<std::size_t>(energies_.size()); }

  /// Psi(t) = sum_n <psi_n|Psi> exp(-i E_n t / hbar) psi_n.
  ComplexField propagate(const ComplexField& psi, double t) const;

 private:
  Grid grid_;
  QuantumParams params_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd vectors_;  // Euclidean-orthonormal columns
};

WaveFunction exact_propagate_small(const WaveFunction& psi, const PotentialSpec& V, double t);

std::vector<Eigenpair> eigenpairs_small(const PotentialSpec& V, const QuantumParams& params,
                                        std::size_t count);

}  // namespace phisim
