#pragma once

#include <Eigen/Core>

#include "phisim/grid.hpp"

// Fourier-space machinery shared by the spectral operators and the solvers.
// Transforms are unnormalized forward / 1/N-normalized inverse, over all
// active axes of the grid. Plans and symbol tables are cached per grid
// geometry; every function here is safe to call from several threads.
namespace phisim::spectral {

Eigen::ArrayXcd forward(const Grid& grid, const Eigen::ArrayXcd& samples);
Eigen::ArrayXcd forward(const Grid& grid, const Eigen::ArrayXd& samples);
Eigen::ArrayXcd inverse(const Grid& grid, const Eigen::ArrayXcd& coefficients);
/// Inverse transform keeping only the real part.
Eigen::ArrayXd inverse_real(const Grid& grid, const Eigen::ArrayXcd& coefficients);

/// Signed integer wavenumber index of Fourier bin j on an axis with n points.
/// The Nyquist bin maps to +n/2.
int mode_index(int j, int n);

/// Real k_eff per Fourier bin such that d/dx_axis acts as multiplication by
/// i*k_eff under the grid's backend. Spectral: 2*pi*m/L with the Nyquist bin
/// zeroed. Central2: sin(k h)/h.
const Eigen::ArrayXd& derivative_symbol(const Grid& grid, int axis);

/// Non-negative lambda per Fourier bin such that the backend Laplacian acts as
/// multiplication by -lambda. Spectral: |k|^2 including the Nyquist bins.
/// Central2: sum over axes of 4 sin^2(k h / 2) / h^2.
const Eigen::ArrayXd& laplacian_symbol(const Grid& grid);

}  // namespace phisim::spectral
