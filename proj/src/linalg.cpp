#include "syncorr/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace syncorr {

double op_norm(const Matrix& x) {
  if (x.rows() == 0) return 0.0;
  return x.jacobiSvd().singularValues()(0);
}

double hermiticity_residual(const Matrix& x) {
  return op_norm(x - x.adjoint());
}

double projection_residual(const Matrix& x) {
  return std::max(op_norm(x * x - x), hermiticity_residual(x));
}

Matrix random_unitary(int d, Rng& rng) {
  Matrix g(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) g(r, c) = Complex(rng.normal(), rng.normal());

  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Absorb the R-diagonal phases so the factorization is unique.
  for (int c = 0; c < d; ++c) {
    const Complex rc = r(c, c);
    const double mag = std::abs(rc);
    if (mag > 0.0) q.col(c) *= rc / mag;
  }
  return q;
}

Matrix unitary_exp(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXd evals = es.eigenvalues();
  Eigen::VectorXcd phases(evals.size());
  for (int k = 0; k < evals.size(); ++k)
    phases(k) = std::exp(Complex(0.0, t * evals(k)));
  return es.eigenvectors() * phases.asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace syncorr
