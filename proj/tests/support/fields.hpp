#pragma once

// Shared fixtures for the unit and acceptance tests.

#include <cmath>
#include <numbers>
#include <random>

#include "phisim/grid.hpp"
#include "phisim/schrodinger.hpp"

namespace phisim::testing {

inline constexpr double kPi = std::numbers::pi;

/// Sum of a few low Fourier modes with random amplitudes and phases. Band
/// limited well below Nyquist, so spectral operators are exact on it.
inline ScalarField smooth_random(const Grid& g, std::uint64_t seed, int max_mode = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  ScalarField f(g);
  const int mz = g.dims() >= 3 ? max_mode : 0;
  const int my = g.dims() >= 2 ? max_mode : 0;
  for (int a = 0; a <= max_mode; ++a) {
    for (int b = -my; b <= my; ++b) {
      for (int c = -mz; c <= mz; ++c) {
        const double A = amp(rng), ph = phase(rng);
        for (std::size_t n = 0; n < g.size(); ++n) {
          const auto ijk = g.unflatten(n);
          double arg = ph + 2.0 * kPi * a * g.coordinate(0, ijk[0]) / g.length(0);
          if (g.dims() >= 2) arg += 2.0 * kPi * b * g.coordinate(1, ijk[1]) / g.length(1);
          if (g.dims() >= 3) arg += 2.0 * kPi * c * g.coordinate(2, ijk[2]) / g.length(2);
          f[n] += A * std::cos(arg);
        }
      }
    }
  }
  return f;
}

/// Independent uniform samples in [-1, 1]; not smooth.
inline ScalarField white_noise(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarField f(g);
  for (std::size_t n = 0; n < g.size(); ++n) f[n] = u(rng);
  return f;
}

inline VectorField3 smooth_random_vector(const Grid& g, std::uint64_t seed, int max_mode = 2) {
  return VectorField3(smooth_random(g, seed, max_mode), smooth_random(g, seed + 1, max_mode),
                      smooth_random(g, seed + 2, max_mode));
}

template <typename F>
ScalarField sample_fn(const Grid& g, F&& f) {
  ScalarField out(g);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto ijk = g.unflatten(n);
    out[n] = f(g.coordinate(0, ijk[0]), g.coordinate(1, ijk[1]), g.coordinate(2, ijk[2]));
  }
  return out;
}

/// V = m w^2 (x - L/2)^2 / 2 on a 1D grid.
inline PotentialSpec harmonic(const Grid& g, double mass = 1.0, double omega = 1.0) {
  const double c = 0.5 * g.length(0);
  return PotentialSpec::from_samples(sample_fn(g, [&](double x, double, double) {
    return 0.5 * mass * omega * omega * (x - c) * (x - c);
  }));
}

inline double rel_l2(const ScalarField& a, const ScalarField& b) {
  return l2_norm(a - b) / std::max(l2_norm(a), l2_norm(b));
}

inline double rel_l2(const ComplexField& a, const ComplexField& b) {
  return l2_norm(a - b) / std::max(l2_norm(a), l2_norm(b));
}

/// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace phisim::testing
