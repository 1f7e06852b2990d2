#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>

namespace miv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Row-per-sample data matrix (n samples of dimension d).
using Dataset = Matrix;

/// n x n matrix of pairwise kernel evaluations, with provenance flags.
struct GramMatrix {
  Matrix values;
  bool centered = false;
  bool weighted = false;

  Eigen::Index size() const { return values.rows(); }
};

/// Strictly positive per-sample weights: the diagonal of P.
struct WeightVector {
  Vector entries;

  Eigen::Index size() const { return entries.size(); }
  static WeightVector ones(Eigen::Index n) { return WeightVector{Vector::Ones(n)}; }
};

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entries");
}

}  // namespace miv
