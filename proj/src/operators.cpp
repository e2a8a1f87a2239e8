#include "phisim/operators.hpp"

#include <cmath>
#include <numbers>

#include "phisim/spectral.hpp"

namespace phisim {
namespace {

const std::complex<double> kI(0.0, 1.0);

void require_3d(const Grid& g, const char* op) {
  if (g.dims() != 3) throw InvalidArgument(std::string(op) + " requires a 3D grid");
}

void require_axis(const Grid& g, int axis) {
  if (axis < 0 || axis >= g.dims()) {
    throw InvalidArgument("derivative axis " + std::to_string(axis) + " outside a " +
                          std::to_string(g.dims()) + "D grid");
  }
}

// Applies out[p] = sum over stencil offsets of w * in[p + offset along axis].
template <typename Array, typename Kernel>
Array stencil(const Grid& g, const Array& in, int axis, Kernel kernel) {
  Array out(in.size());
  const int n[3] = {g.points(0), g.points(1), g.points(2)};
  for (int k = 0; k < n[2]; ++k) {
    for (int j = 0; j < n[1]; ++j) {
      for (int i = 0; i < n[0]; ++i) {
        int idx[3] = {i, j, k};
        auto at = [&](int offset) {
          int shifted[3] = {idx[0], idx[1], idx[2]};
          shifted[axis] = (shifted[axis] + offset + n[axis]) % n[axis];
          return in[static_cast<Eigen::Index>(g.index(shifted[0], shifted[1], shifted[2]))];
        };
        out[static_cast<Eigen::Index>(g.index(i, j, k))] = kernel(at);
      }
    }
  }
  return out;
}

template <typename Array>
Array central_partial(const Grid& g, const Array& in, int axis) {
  const double inv = 1.0 / (2.0 * g.spacing(axis));
  return stencil(g, in, axis, [inv](auto at) { return (at(1) - at(-1)) * inv; });
}

template <typename Array>
Array central_laplacian(const Grid& g, const Array& in) {
  Array out = Array::Zero(in.size());
  for (int a = 0; a < g.dims(); ++a) {
    const double inv = 1.0 / (g.spacing(a) * g.spacing(a));
    out += stencil(g, in, a, [inv](auto at) { return (at(1) - 2.0 * at(0) + at(-1)) * inv; });
  }
  return out;
}

Grid as_backend(const Grid& g, Backend method) { return g.with_backend(method); }

}  // namespace

ScalarField laplacian(const ScalarField& f) { return laplacian(f, f.grid.backend()); }

ScalarField laplacian(const ScalarField& f, Backend method) {
  if (method == Backend::central2) return ScalarField(f.grid, central_laplacian(f.grid, f.values));
  const Grid g = as_backend(f.grid, method);
  Eigen::ArrayXcd c = spectral::forward(g, f.values);
  c *= -spectral::laplacian_symbol(g);
  return ScalarField(f.grid, spectral::inverse_real(g, c));
}

ComplexField laplacian(const ComplexField& f) { return laplacian(f, f.grid.backend()); }

ComplexField laplacian(const ComplexField& f, Backend method) {
  if (method == Backend::central2) {
    return ComplexField(f.grid, central_laplacian(f.grid, f.values));
  }
  const Grid g = as_backend(f.grid, method);
  Eigen::ArrayXcd c = spectral::forward(g, f.values);
  c *= -spectral::laplacian_symbol(g);
  return ComplexField(f.grid, spectral::inverse(g, c));
}

ScalarField partial(const ScalarField& f, int axis) { return partial(f, axis, f.grid.backend()); }

ScalarField partial(const ScalarField& f, int axis, Backend method) {
  require_axis(f.grid, axis);
  if (method == Backend::central2) {
    return ScalarField(f.grid, central_partial(f.grid, f.values, axis));
  }
  const Grid g = as_backend(f.grid, method);
  Eigen::ArrayXcd c = spectral::forward(g, f.values);
  c *= kI * spectral::derivative_symbol(g, axis);
  return ScalarField(f.grid, spectral::inverse_real(g, c));
}

VectorField3 gradient(const ScalarField& f) { return gradient(f, f.grid.backend()); }

VectorField3 gradient(const ScalarField& f, Backend method) {
  require_3d(f.grid, "gradient");
  if (method == Backend::central2) {
    return VectorField3(partial(f, 0, method), partial(f, 1, method), partial(f, 2, method));
  }
  const Grid g = as_backend(f.grid, method);
  const Eigen::ArrayXcd c = spectral::forward(g, f.values);
  VectorField3 out(f.grid);
  for (int a = 0; a < 3; ++a) {
    Eigen::ArrayXcd d = c * (kI * spectral::derivative_symbol(g, a));
    out[a].values = spectral::inverse_real(g, d);
  }
  return out;
}

ScalarField divergence(const VectorField3& v) { return divergence(v, v.grid().backend()); }

ScalarField divergence(const VectorField3& v, Backend method) {
  require_3d(v.grid(), "divergence");
  if (method == Backend::central2) {
    return partial(v[0], 0, method) + partial(v[1], 1, method) + partial(v[2], 2, method);
  }
  const Grid g = as_backend(v.grid(), method);
  Eigen::ArrayXcd acc = Eigen::ArrayXcd::Zero(static_cast<Eigen::Index>(g.size()));
  for (int a = 0; a < 3; ++a) {
    acc += spectral::forward(g, v[a].values) * (kI * spectral::derivative_symbol(g, a));
  }
  return ScalarField(v.grid(), spectral::inverse_real(g, acc));
}

VectorField3 curl(const VectorField3& v) { return curl(v, v.grid().backend()); }

VectorField3 curl(const VectorField3& v, Backend method) {
  require_3d(v.grid(), "curl");
  if (method == Backend::central2) {
    auto d = [&](int comp, int axis) { return partial(v[comp], axis, method); };
    return VectorField3(d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1));
  }
  const Grid g = as_backend(v.grid(), method);
  std::array<Eigen::ArrayXcd, 3> c;
  for (int a = 0; a < 3; ++a) c[a] = spectral::forward(g, v[a].values);
  const auto& kx = spectral::derivative_symbol(g, 0);
  const auto& ky = spectral::derivative_symbol(g, 1);
  const auto& kz = spectral::derivative_symbol(g, 2);
  VectorField3 out(v.grid());
  out[0].values = spectral::inverse_real(g, kI * (ky * c[2] - kz * c[1]));
  out[1].values = spectral::inverse_real(g, kI * (kz * c[0] - kx * c[2]));
  out[2].values = spectral::inverse_real(g, kI * (kx * c[1] - ky * c[0]));
  return out;
}

VectorField3 vector_laplacian(const VectorField3& v) {
  return vector_laplacian(v, v.grid().backend());
}

VectorField3 vector_laplacian(const VectorField3& v, Backend method) {
  return VectorField3(laplacian(v[0], method), laplacian(v[1], method), laplacian(v[2], method));
}

double curl_curl_identity_residual(const VectorField3& v) {
  return curl_curl_identity_residual(v, v.grid().backend());
}

double curl_curl_identity_residual(const VectorField3& v, Backend method) {
  const VectorField3 lhs = curl(curl(v, method), method);
  const VectorField3 grad_div = gradient(divergence(v, method), method);
  double worst = 0.0;
  for (int c = 0; c < 3; ++c) {
    ScalarField lap(v.grid());
    for (int a = 0; a < 3; ++a) lap = lap + partial(partial(v[c], a, method), a, method);
    const ScalarField rhs = grad_div[c] - lap;
    worst = std::max(worst, max_abs(lhs[c] - rhs));
  }
  return worst;
}

double gradient_energy(const ScalarField& f) {
  const Grid& g = f.grid;
  if (g.backend() == Backend::central2) {
    double total = 0.0;
    for (int a = 0; a < g.dims(); ++a) {
      const double inv = 1.0 / g.spacing(a);
      const Eigen::ArrayXd diff =
          stencil(g, f.values, a, [inv](auto at) { return (at(1) - at(0)) * inv; });
      total += diff.square().sum();
    }
    return total * g.cell_volume();
  }
  const Eigen::ArrayXcd c = spectral::forward(g, f.values);
  const double n = static_cast<double>(g.size());
  return (spectral::laplacian_symbol(g) * c.abs2()).sum() / n * g.cell_volume();
}

double laplacian_spectral_radius(const Grid& grid) {
  double radius = 0.0;
  for (int a = 0; a < grid.dims(); ++a) {
    const double h = grid.spacing(a);
    radius += grid.backend() == Backend::spectral ? std::pow(std::numbers::pi / h, 2)
                                                  : 4.0 / (h * h);
  }
  return radius;
}

double max_wavenumber(const Grid& grid) {
  double k2 = 0.0;
  for (int a = 0; a < grid.dims(); ++a) k2 += std::pow(std::numbers::pi / grid.spacing(a), 2);
  return std::sqrt(k2);
}

}  // namespace phisim
