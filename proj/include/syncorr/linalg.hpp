#pragma once

#include <Eigen/Dense>
#include <complex>

#include "syncorr/rng.hpp"

namespace syncorr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Largest singular value.
double op_norm(const Matrix& x);

/// ‖X − X*‖.
double hermiticity_residual(const Matrix& x);

/// max(‖X² − X‖, ‖X − X*‖).
double projection_residual(const Matrix& x);

/// Unitary from the QR factorization of a complex Gaussian matrix, with the
/// R-diagonal phases absorbed so the result is unique given the input.
Matrix random_unitary(int d, Rng& rng);

/// e^{i t H} for hermitian H, by eigendecomposition.
Matrix unitary_exp(const Matrix& h, double t);

}  // namespace syncorr
