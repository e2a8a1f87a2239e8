#include "phisim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace phisim {

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::spectral:
      return "spectral";
    case Backend::central2:
      return "central2";
  }
  return "unknown";
}

Backend parse_backend(std::string_view name) {
  if (name == "spectral") return Backend::spectral;
  if (name == "central2") return Backend::central2;
  throw InvalidArgument("unknown operator backend '" + std::string(name) +
                        "' (expected spectral or central2)");
}

Grid::Grid(int dims, std::array<int, 3> points, std::array<double, 3> lengths, Backend backend)
    : dims_(dims), points_(points), lengths_(lengths), backend_(backend) {
  if (dims < 1 || dims > 3) {
    throw InvalidArgument("grid dims must be 1, 2 or 3, got " + std::to_string(dims));
  }
  for (int a = 0; a < 3; ++a) {
    if (a >= dims) {
      points_[a] = 1;
      lengths_[a] = 1.0;
      continue;
    }
    if (points_[a] < 4 || points_[a] % 2 != 0) {
      throw InvalidArgument("grid points per axis must be even and >= 4 (axis " +
                            std::to_string(a) + " has " + std::to_string(points_[a]) + ")");
    }
    if (!(lengths_[a] > 0.0) || !std::isfinite(lengths_[a])) {
      throw InvalidArgument("grid length must be positive and finite on axis " +
                            std::to_string(a));
    }
  }
}

Grid Grid::line(int n, double length, Backend backend) {
  return Grid(1, {n, 1, 1}, {length, 1.0, 1.0}, backend);
}

Grid Grid::cube(int n, double length, Backend backend) {
  return Grid(3, {n, n, n}, {length, length, length}, backend);
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dims_; ++a) v *= spacing(a);
  return v;
}

double Grid::box_volume() const {
  double v = 1.0;
  for (int a = 0; a < dims_; ++a) v *= lengths_[a];
  return v;
}

std::array<int, 3> Grid::unflatten(std::size_t flat) const {
  const auto nx = static_cast<std::size_t>(points_[0]);
  const auto ny = static_cast<std::size_t>(points_[1]);
  return {static_cast<int>(flat % nx), static_cast<int>((flat / nx) % ny),
          static_cast<int>(flat / (nx * ny))};
}

Grid Grid::with_backend(Backend backend) const {
  Grid g = *this;
  g.backend_ = backend;
  return g;
}

std::string Grid::describe() const {
  std::ostringstream os;
  os << dims_ << "D ";
  for (int a = 0; a < dims_; ++a) os << (a ? "x" : "") << points_[a];
  os << " box ";
  for (int a = 0; a < dims_; ++a) os << (a ? "x" : "") << lengths_[a];
  os << " (" << to_string(backend_) << ")";
  return os.str();
}

void require_same_grid(const Grid& a, const Grid& b, std::string_view context) {
  if (!(a == b)) {
    throw GridMismatch(std::string(context) + ": grid mismatch (" + a.describe() + " vs " +
                       b.describe() + ")");
  }
}

ScalarField::ScalarField(const Grid& g)
    : grid(g), values(Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(g.size()))) {}

ScalarField::ScalarField(const Grid& g, Eigen::ArrayXd v) : grid(g), values(std::move(v)) {
  if (static_cast<std::size_t>(values.size()) != grid.size()) {
    throw InvalidArgument("scalar field sample count does not match grid size");
  }
}

ScalarField ScalarField::constant(const Grid& g, double value) {
  return ScalarField(g, Eigen::ArrayXd::Constant(static_cast<Eigen::Index>(g.size()), value));
}

ComplexField::ComplexField(const Grid& g)
    : grid(g), values(Eigen::ArrayXcd::Zero(static_cast<Eigen::Index>(g.size()))) {}

ComplexField::ComplexField(const Grid& g, Eigen::ArrayXcd v) : grid(g), values(std::move(v)) {
  if (static_cast<std::size_t>(values.size()) != grid.size()) {
    throw InvalidArgument("complex field sample count does not match grid size");
  }
}

ComplexField::ComplexField(const ScalarField& re, const ScalarField& im) : grid(re.grid) {
  require_same_grid(re.grid, im.grid, "complex field assembly");
  values.resize(re.values.size());
  values.real() = re.values;
  values.imag() = im.values;
}

VectorField3::VectorField3(const Grid& g)
    : components_{ScalarField(g), ScalarField(g), ScalarField(g)} {
  if (g.dims() != 3) throw InvalidArgument("vector fields require a 3D grid");
}

VectorField3::VectorField3(ScalarField x, ScalarField y, ScalarField z)
    : components_{std::move(x), std::move(y), std::move(z)} {
  if (components_[0].grid.dims() != 3) throw InvalidArgument("vector fields require a 3D grid");
  require_same_grid(components_[0].grid, components_[1].grid, "vector field");
  require_same_grid(components_[0].grid, components_[2].grid, "vector field");
}

bool VectorField3::all_finite() const {
  return components_[0].all_finite() && components_[1].all_finite() &&
         components_[2].all_finite();
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid, "field addition");
  return ScalarField(a.grid, a.values + b.values);
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid, "field subtraction");
  return ScalarField(a.grid, a.values - b.values);
}

ScalarField operator-(const ScalarField& a) { return ScalarField(a.grid, -a.values); }

ScalarField operator*(double s, const ScalarField& f) { return ScalarField(f.grid, s * f.values); }

ComplexField operator+(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid, b.grid, "field addition");
  return ComplexField(a.grid, a.values + b.values);
}

ComplexField operator-(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid, b.grid, "field subtraction");
  return ComplexField(a.grid, a.values - b.values);
}

ComplexField operator*(std::complex<double> s, const ComplexField& f) {
  return ComplexField(f.grid, s * f.values);
}

VectorField3 operator+(const VectorField3& a, const VectorField3& b) {
  return VectorField3(a[0] + b[0], a[1] + b[1], a[2] + b[2]);
}

VectorField3 operator-(const VectorField3& a, const VectorField3& b) {
  return VectorField3(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

VectorField3 operator*(double s, const VectorField3& v) {
  return VectorField3(s * v[0], s * v[1], s * v[2]);
}

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid, "inner product");
  return (a.values * b.values).sum() * a.grid.cell_volume();
}

std::complex<double> inner(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid, b.grid, "inner product");
  return (a.values.conjugate() * b.values).sum() * a.grid.cell_volume();
}

double inner(const VectorField3& a, const VectorField3& b) {
  return inner(a[0], b[0]) + inner(a[1], b[1]) + inner(a[2], b[2]);
}

double l2_norm(const ScalarField& f) {
  return std::sqrt(f.values.square().sum() * f.grid.cell_volume());
}

double l2_norm(const ComplexField& f) {
  return std::sqrt(f.values.abs2().sum() * f.grid.cell_volume());
}

double l2_norm(const VectorField3& v) { return std::sqrt(inner(v, v)); }

double max_abs(const ScalarField& f) { return f.values.size() ? f.values.abs().maxCoeff() : 0.0; }

double max_abs(const ComplexField& f) { return f.values.size() ? f.values.abs().maxCoeff() : 0.0; }

double max_abs(const VectorField3& v) {
  return std::max({max_abs(v[0]), max_abs(v[1]), max_abs(v[2])});
}

}  // namespace phisim
