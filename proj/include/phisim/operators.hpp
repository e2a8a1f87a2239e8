#pragma once

#include "phisim/grid.hpp"

// Discrete differential operators on periodic grids.
//
// Every operator has an overload taking an explicit backend; the plain
// overload uses the backend carried by the field's grid. Spectral operators
// are exact for band-limited fields; the derivative of the Nyquist mode is
// zero while the Laplacian keeps it (-k_nyquist^2). Central2 uses the
// three-point stencils (f[i+1] - f[i-1]) / 2h and (f[i+1] - 2f[i] + f[i-1]) / h^2.
namespace phisim {

ScalarField laplacian(const ScalarField& f);
ScalarField laplacian(const ScalarField& f, Backend method);
ComplexField laplacian(const ComplexField& f);
ComplexField laplacian(const ComplexField& f, Backend method);

ScalarField partial(const ScalarField& f, int axis);
ScalarField partial(const ScalarField& f, int axis, Backend method);

VectorField3 gradient(const ScalarField& f);
VectorField3 gradient(const ScalarField& f, Backend method);
ScalarField divergence(const VectorField3& v);
ScalarField divergence(const VectorField3& v, Backend method);
VectorField3 curl(const VectorField3& v);
VectorField3 curl(const VectorField3& v, Backend method);

/// Componentwise Laplacian.
VectorField3 vector_laplacian(const VectorField3& v);
VectorField3 vector_laplacian(const VectorField3& v, Backend method);

/// max-norm of curl(curl v) - (-Lap v + grad(div v)).
///
/// The Laplacian in this check is the composition sum_a d_a d_a of the
/// backend's first derivatives, the form in which the identity is an exact
/// consequence of commuting derivatives for both backends.
double curl_curl_identity_residual(const VectorField3& v);
double curl_curl_identity_residual(const VectorField3& v, Backend method);

/// Sum over cells of |grad f|^2 times the cell volume.
///
/// Spectral: evaluated by Parseval as sum lambda_k |f_k|^2 (Nyquist included).
/// Central2: forward differences. Both equal -<f, Lap f> exactly, the
/// discrete integration-by-parts identity for the backend Laplacian.
double gradient_energy(const ScalarField& f);

/// Largest eigenvalue magnitude of the backend Laplacian.
double laplacian_spectral_radius(const Grid& grid);

/// Largest wavenumber magnitude the grid resolves, sqrt(sum_a (pi / h_a)^2).
double max_wavenumber(const Grid& grid);

}  // namespace phisim
