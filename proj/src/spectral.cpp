#include "phisim/spectral.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>
#include <vector>

#include <fftw3.h>

namespace phisim::spectral {
namespace {

using GeometryKey = std::tuple<int, std::array<int, 3>, std::array<double, 3>, Backend>;

struct Tables {
  fftw_plan forward_plan = nullptr;
  fftw_plan inverse_plan = nullptr;
  std::array<Eigen::ArrayXd, 3> derivative;
  Eigen::ArrayXd laplacian;

  Tables() = default;
  Tables(const Tables&) = delete;
  Tables& operator=(const Tables&) = delete;
  ~Tables() {
    if (forward_plan) fftw_destroy_plan(forward_plan);
    if (inverse_plan) fftw_destroy_plan(inverse_plan);
  }
};

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::unique_ptr<Tables> build_tables(const Grid& grid) {
  auto owned = std::make_unique<Tables>();
  Tables& t = *owned;
  const int dims = grid.dims();
  // FFTW wants the slowest axis first.
  std::array<int, 3> n{};
  for (int a = 0; a < dims; ++a) n[a] = grid.points(dims - 1 - a);

  const auto size = static_cast<Eigen::Index>(grid.size());
  std::vector<fftw_complex> in(grid.size()), out(grid.size());
  t.forward_plan = fftw_plan_dft(dims, n.data(), in.data(), out.data(), FFTW_FORWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  t.inverse_plan = fftw_plan_dft(dims, n.data(), in.data(), out.data(), FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!t.forward_plan || !t.inverse_plan) throw NumericalError("FFTW planning failed");

  for (auto& d : t.derivative) d = Eigen::ArrayXd::Zero(size);
  t.laplacian = Eigen::ArrayXd::Zero(size);

  const bool spectral = grid.backend() == Backend::spectral;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto idx = grid.unflatten(p);
    double lambda = 0.0;
    for (int a = 0; a < dims; ++a) {
      const int np = grid.points(a);
      const int m = mode_index(idx[a], np);
      const double h = grid.spacing(a);
      const double k = 2.0 * std::numbers::pi * m / grid.length(a);
      if (spectral) {
        t.derivative[a][static_cast<Eigen::Index>(p)] = (2 * m == np) ? 0.0 : k;
        lambda += k * k;
      } else {
        t.derivative[a][static_cast<Eigen::Index>(p)] = std::sin(k * h) / h;
        const double s = std::sin(0.5 * k * h);
        lambda += 4.0 * s * s / (h * h);
      }
    }
    t.laplacian[static_cast<Eigen::Index>(p)] = lambda;
  }
  return owned;
}

const Tables& tables_for(const Grid& grid) {
  static std::map<GeometryKey, std::unique_ptr<Tables>> cache;
  std::array<int, 3> pts{grid.points(0), grid.points(1), grid.points(2)};
  std::array<double, 3> len{grid.length(0), grid.length(1), grid.length(2)};
  GeometryKey key{grid.dims(), pts, len, grid.backend()};

  std::lock_guard lock(planner_mutex());
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, build_tables(grid)).first;
  }
  return *it->second;
}

}  // namespace

int mode_index(int j, int n) { return (2 * j <= n) ? j : j - n; }

Eigen::ArrayXcd forward(const Grid& grid, const Eigen::ArrayXcd& samples) {
  const Tables& t = tables_for(grid);
  Eigen::ArrayXcd out(samples.size());
  // fftw_execute_dft does not modify the input for out-of-place plans.
  auto* in = const_cast<std::complex<double>*>(samples.data());
  fftw_execute_dft(t.forward_plan, reinterpret_cast<fftw_complex*>(in),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

Eigen::ArrayXcd forward(const Grid& grid, const Eigen::ArrayXd& samples) {
  Eigen::ArrayXcd c = samples.cast<std::complex<double>>();
  return forward(grid, c);
}

Eigen::ArrayXcd inverse(const Grid& grid, const Eigen::ArrayXcd& coefficients) {
  const Tables& t = tables_for(grid);
  Eigen::ArrayXcd out(coefficients.size());
  auto* in = const_cast<std::complex<double>*>(coefficients.data());
  fftw_execute_dft(t.inverse_plan, reinterpret_cast<fftw_complex*>(in),
                   reinterpret_cast<fftw_complex*>(out.data()));
  out /= static_cast<double>(grid.size());
  return out;
}

Eigen::ArrayXd inverse_real(const Grid& grid, const Eigen::ArrayXcd& coefficients) {
  return inverse(grid, coefficients).real();
}

const Eigen::ArrayXd& derivative_symbol(const Grid& grid, int axis) {
  if (axis < 0 || axis >= grid.dims()) {
    throw InvalidArgument("derivative axis " + std::to_string(axis) + " outside a " +
                          std::to_string(grid.dims()) + "D grid");
  }
  return tables_for(grid).derivative[axis];
}

const Eigen::ArrayXd& laplacian_symbol(const Grid& grid) { return tables_for(grid).laplacian; }

}  // namespace phisim::spectral
