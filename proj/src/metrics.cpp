#include "miv/metrics.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

#include "miv/linalg.hpp"

namespace miv {

double procrustes_error(const Matrix& e, const Matrix& z) {
  require(e.rows() == z.rows() && e.cols() == z.cols(), "procrustes_error: shape mismatch");
  require_finite(e, "procrustes_error e");
  require_finite(z, "procrustes_error z");
  const double n = static_cast<double>(z.rows());
  Matrix ec = e.rowwise() - e.colwise().mean();
  Matrix zc = z.rowwise() - z.colwise().mean();
  double ne = ec.norm(), nz = zc.norm();
  if (ne == 0.0 || nz == 0.0)
    throw std::domain_error("procrustes_error: zero-variance configuration");
  // Materialize the optimal rotation and scale and evaluate the residual
  // directly; the closed form sqrt(1 - c^2) loses precision near zero.
  TruncatedSvd s = trunc_svd(Matrix(ec.transpose() * zc), static_cast<int>(e.cols()));
  Matrix rot = s.left_vectors * s.right_vectors.transpose();
  double scale = s.singular_values.sum() / (ne * ne);
  return std::sqrt((scale * ec * rot - zc).squaredNorm() / n);
}

Vector principal_angles(const Matrix& u, const Matrix& m) {
  require(u.rows() == m.rows(), "principal_angles: ambient dimension mismatch");
  require(u.cols() >= 1 && u.cols() <= m.cols(), "principal_angles: need 1 <= k <= k'");
  auto orthonormalize = [](const Matrix& a) {
    Eigen::ColPivHouseholderQR<Matrix> qr(a);
    if (qr.rank() < a.cols())
      throw std::domain_error("principal_angles: rank-deficient basis");
    Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
    return q;
  };
  Matrix qu = orthonormalize(u);
  Matrix qm = orthonormalize(m);
  TruncatedSvd s = trunc_svd(qu.transpose() * qm, static_cast<int>(u.cols()));
  Vector angles(u.cols());
  for (Eigen::Index i = 0; i < angles.size(); ++i)
    angles(i) = std::acos(std::clamp(s.singular_values(i), -1.0, 1.0));
  std::sort(angles.begin(), angles.end());
  return angles;
}

}  // namespace miv
