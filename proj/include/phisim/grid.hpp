#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "phisim/errors.hpp"

namespace phisim {

/// Discretization of the differential operators. Uniform across a run.
enum class Backend { spectral, central2 };

std::string_view to_string(Backend b);
Backend parse_backend(std::string_view name);

/// Uniform periodic grid in 1, 2 or 3 dimensions.
///
/// Samples are cell-centered: coordinate(a, i) = (i + 1/2) * spacing(a), so the
/// box along axis a is [0, length(a)). Flat storage is row-major with x
/// fastest: index(i, j, k) = i + nx * (j + ny * k). Axes beyond dims() have a
/// single point and do not contribute to the cell volume.
class Grid {
 public:
  Grid(int dims, std::array<int, 3> points, std::array<double, 3> lengths,
       Backend backend = Backend::spectral);

  static Grid line(int n, double length, Backend backend = Backend::spectral);
  static Grid cube(int n, double length, Backend backend = Backend::spectral);

  int dims() const { return dims_; }
  int points(int axis) const { return points_[axis]; }
  double length(int axis) const { return lengths_[axis]; }
  double spacing(int axis) const { return lengths_[axis] / points_[axis]; }
  Backend backend() const { return backend_; }

  std::size_t size() const {
    return static_cast<std::size_t>(points_[0]) * points_[1] * points_[2];
  }
  double cell_volume() const;
  double box_volume() const;

  double coordinate(int axis, int index) const { return (index + 0.5) * spacing(axis); }
  std::size_t index(int i, int j = 0, int k = 0) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(points_[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(points_[1]) * k);
  }
  /// Inverse of index(): per-axis integer indices of a flat position.
  std::array<int, 3> unflatten(std::size_t flat) const;

  /// Same geometry with a different operator backend.
  Grid with_backend(Backend backend) const;

  bool operator==(const Grid& other) const = default;

  std::string describe() const;

 private:
  int dims_;
  std::array<int, 3> points_;
  std::array<double, 3> lengths_;
  Backend backend_;
};

void require_same_grid(const Grid& a, const Grid& b, std::string_view context);

struct ScalarField {
  Grid grid;
  Eigen::ArrayXd values;

  explicit ScalarField(const Grid& g);
  ScalarField(const Grid& g, Eigen::ArrayXd v);

  static ScalarField constant(const Grid& g, double value);

  double& operator[](std::size_t i) { return values[static_cast<Eigen::Index>(i)]; }
  double operator[](std::size_t i) const { return values[static_cast<Eigen::Index>(i)]; }
  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  bool all_finite() const { return values.allFinite(); }
};

struct ComplexField {
  Grid grid;
  Eigen::ArrayXcd values;

  explicit ComplexField(const Grid& g);
  ComplexField(const Grid& g, Eigen::ArrayXcd v);
  ComplexField(const ScalarField& re, const ScalarField& im);

  ScalarField real() const { return ScalarField(grid, values.real()); }
  ScalarField imag() const { return ScalarField(grid, values.imag()); }
  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  bool all_finite() const { return values.allFinite(); }
};

/// Three scalar components on one 3D grid.
class VectorField3 {
 public:
  explicit VectorField3(const Grid& g);
  VectorField3(ScalarField x, ScalarField y, ScalarField z);

  const Grid& grid() const { return components_[0].grid; }
  ScalarField& operator[](int c) { return components_[c]; }
  const ScalarField& operator[](int c) const { return components_[c]; }
  bool all_finite() const;

 private:
  std::array<ScalarField, 3> components_;
};

// Pointwise arithmetic; grids must match.
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a);
ScalarField operator*(double s, const ScalarField& f);
ComplexField operator+(const ComplexField& a, const ComplexField& b);
ComplexField operator-(const ComplexField& a, const ComplexField& b);
ComplexField operator*(std::complex<double> s, const ComplexField& f);
VectorField3 operator+(const VectorField3& a, const VectorField3& b);
VectorField3 operator-(const VectorField3& a, const VectorField3& b);
VectorField3 operator*(double s, const VectorField3& v);

/// Discrete inner products: plain sum times cell volume.
double inner(const ScalarField& a, const ScalarField& b);
std::complex<double> inner(const ComplexField& a, const ComplexField& b);
double inner(const VectorField3& a, const VectorField3& b);

double l2_norm(const ScalarField& f);
double l2_norm(const ComplexField& f);
double l2_norm(const VectorField3& v);

double max_abs(const ScalarField& f);
double max_abs(const ComplexField& f);
double max_abs(const VectorField3& v);

}  // namespace phisim
