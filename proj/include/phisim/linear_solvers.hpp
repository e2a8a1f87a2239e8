#pragma once

#include <cmath>
#include <complex>
#include <functional>

#include <Eigen/Core>

// Matrix-free Krylov solvers over Eigen arrays. The operator and the
// preconditioner are callables Array -> Array; the preconditioner must be
// Hermitian positive definite.
namespace phisim::linear {

template <typename Array>
struct SolveResult {
  Array x;
  int iterations = 0;
  double residual_norm = 0.0;  // recursive residual at exit
  bool converged = false;
};

template <typename Array>
auto dot(const Array& a, const Array& b) {
  return (a.conjugate() * b).sum();
}

template <typename Array>
double norm(const Array& a) {
  return std::sqrt(a.abs2().sum());
}

/// Preconditioned conjugate gradients for Hermitian positive definite A.
/// Stops once the residual 2-norm drops to abs_tolerance.
template <typename Array, typename Op, typename Precond>
SolveResult<Array> pcg(Op&& apply_a, Precond&& apply_m_inv, const Array& b, Array x0,
                       double abs_tolerance, int max_iterations) {
  SolveResult<Array> out;
  out.x = std::move(x0);
  Array r = b - apply_a(out.x);
  out.residual_norm = norm(r);
  if (out.residual_norm <= abs_tolerance) {
    out.converged = true;
    return out;
  }
  Array z = apply_m_inv(r);
  Array p = z;
  auto rz = dot(r, z);
  for (int it = 1; it <= max_iterations; ++it) {
    const Array ap = apply_a(p);
    const auto alpha = rz / dot(p, ap);
    out.x += alpha * p;
    r -= alpha * ap;
    out.iterations = it;
    out.residual_norm = norm(r);
    if (out.residual_norm <= abs_tolerance) {
      out.converged = true;
      return out;
    }
    z = apply_m_inv(r);
    const auto rz_next = dot(r, z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  return out;
}

/// Preconditioned MINRES for real symmetric, possibly indefinite A.
/// Stops once the residual 2-norm drops to abs_tolerance.
template <typename Op, typename Precond>
SolveResult<Eigen::ArrayXd> pminres(Op&& apply_a, Precond&& apply_m_inv, const Eigen::ArrayXd& b,
                                    Eigen::ArrayXd x0, double abs_tolerance,
                                    int max_iterations) {
  using Array = Eigen::ArrayXd;
  SolveResult<Array> out;
  out.x = std::move(x0);
  const Eigen::Index n = b.size();

  Array r1 = b - apply_a(out.x);
  Array y = apply_m_inv(r1);
  double beta1 = (r1 * y).sum();
  if (beta1 < 0.0) return out;  // preconditioner not positive definite
  beta1 = std::sqrt(beta1);
  out.residual_norm = norm(r1);
  if (out.residual_norm <= abs_tolerance) {
    out.converged = true;
    return out;
  }

  Array r2 = r1;
  Array w = Array::Zero(n), w1 = Array::Zero(n), w2 = Array::Zero(n);
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;

  for (int it = 1; it <= max_iterations; ++it) {
    const Array v = y / beta;
    y = apply_a(v);
    if (it >= 2) y -= (beta / oldb) * r1;
    const double alfa = (v * y).sum();
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    y = apply_m_inv(r2);
    oldb = beta;
    beta = (r2 * y).sum();
    if (beta < 0.0) return out;
    beta = std::sqrt(beta);

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), 1e-300);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    out.x += phi * w;
    out.iterations = it;

    // phibar tracks the preconditioned residual norm; test the true one.
    out.residual_norm = norm(Array(b - apply_a(out.x)));
    if (out.residual_norm <= abs_tolerance) {
      out.converged = true;
      return out;
    }
    if (beta == 0.0) return out;
  }
  out.residual_norm = norm(Array(b - apply_a(out.x)));
  out.converged = out.residual_norm <= abs_tolerance;
  return out;
}

}  // namespace phisim::linear
