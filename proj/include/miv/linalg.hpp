#pragma once

#include <functional>

#include "miv/types.hpp"

namespace miv {

/// Full eigendecomposition of a symmetric matrix, eigenvalues sorted
/// non-increasing, eigenvectors column-paired and sign-normalized so the
/// largest-magnitude entry of each is positive.
struct SymmetricSpectrum {
  Vector eigenvalues;
  Matrix eigenvectors;
};

/// Top-k singular triple. Columns of left/right are orthonormal and carry the
/// same sign convention as SymmetricSpectrum.
struct TruncatedSvd {
  Matrix left_vectors;
  Vector singular_values;
  Matrix right_vectors;
};

/// Dense symmetric eigendecomposition (LAPACK dsyevd). Near-symmetric inputs
/// are symmetrized by averaging with the transpose first.
SymmetricSpectrum sym_eig(const Matrix& m);

/// Top-m eigenpairs of a symmetric matrix (LAPACK dsyevr index range),
/// descending. Same conventions as sym_eig.
SymmetricSpectrum sym_eig_topm(const Matrix& m, int m_pairs);

/// Matrix-free variant for large problems: Lanczos with full
/// reorthogonalization on a symmetric operator. Deterministic (seeded start
/// vector) and accurate to ~1e-9 relative residual on the returned pairs.
using SymOp = std::function<Vector(const Vector&)>;
SymmetricSpectrum sym_eig_topm(const SymOp& op, Eigen::Index n, int m_pairs,
                               int max_iter = 1000, double tol = 1e-9);

/// Top-k triple of the full SVD (LAPACK dgesdd). k must not exceed min(p, q);
/// k past the numerical rank succeeds with ~0 trailing singular values.
TruncatedSvd trunc_svd(const Matrix& m, int k);

/// Returns R with R (M + eta I) R = I, computed by eigendecomposition with
/// negative eigenvalues clamped to zero before the shift. Requires eta > 0
/// when the clamped matrix is singular.
Matrix sym_inv_sqrt(const Matrix& m, double eta);

/// H G H with H = I - (1/n) 1 1^T.
Matrix double_center(const Matrix& g);

}  // namespace miv
