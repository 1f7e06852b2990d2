#pragma once

#include <random>

#include "miv/types.hpp"

namespace miv::testutil {

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> gauss;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = gauss(rng);
  return m;
}

inline Matrix random_symmetric(std::mt19937_64& rng, Eigen::Index n) {
  Matrix a = random_matrix(rng, n, n);
  return 0.5 * (a + a.transpose());
}

inline Matrix random_spsd(std::mt19937_64& rng, Eigen::Index n, Eigen::Index rank) {
  Matrix a = random_matrix(rng, n, rank);
  return a * a.transpose();
}

// Relative Frobenius distance, safe for zero reference.
inline double rel_fro(const Matrix& a, const Matrix& ref) {
  double denom = ref.norm();
  return denom == 0.0 ? a.norm() : (a - ref).norm() / denom;
}

// Column-wise comparison up to per-column sign.
inline double max_coldiff_upto_sign(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    double d1 = (a.col(j) - b.col(j)).cwiseAbs().maxCoeff();
    double d2 = (a.col(j) + b.col(j)).cwiseAbs().maxCoeff();
    worst = std::max(worst, std::min(d1, d2));
  }
  return worst;
}

}  // namespace miv::testutil
