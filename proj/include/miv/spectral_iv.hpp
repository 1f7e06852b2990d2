#pragma once

#include "miv/linalg.hpp"
#include "miv/types.hpp"

namespace miv {

/// Which decomposition route a Gram-route operation used. `svd` is the
/// literal SVD of the matrix product; `eig` is the eigendecomposition
/// construction (right eigenvectors of the reversed product, coefficients
/// rescaled so each reconstructs a unit-length feature-space function).
enum class GramRoute { svd, eig };

enum class DecompositionKind { gram_svd, gram_rrr, gram_cca };

/// Singular pairs of a cross-covariance operator represented by per-view
/// coefficient vectors over the centered samples.
struct PairedDecomposition {
  Matrix left_coeffs;   // n x k
  Matrix right_coeffs;  // n x k
  Vector spectrum;      // length k, non-negative, non-increasing
  double regularizer_eta = 0.0;
  DecompositionKind kind = DecompositionKind::gram_svd;
  GramRoute route = GramRoute::svd;
};

/// SVD of the centered cross-covariance (1/n)(XH)(YH)^T truncated to k.
/// Datasets are row-per-sample.
TruncatedSvd two_subspace_pca(const Dataset& x, const Dataset& y, int k);

/// Reduced-rank regression: SVD of S_XY (S_YY + eta I)^{-1} Y_c^T, truncated
/// to k (the covariance of X with the whitened instruments).
TruncatedSvd linear_rrr(const Dataset& x, const Dataset& y, double eta, int k);

/// Canonical correlation analysis: SVD of the doubly-whitened
/// cross-covariance (S_XX + eta I)^{-1/2} S_XY (S_YY + eta I)^{-1/2}.
TruncatedSvd linear_cca(const Dataset& x, const Dataset& y, double eta, int k);

/// Kernel SVD of the cross-covariance operator through centered (optionally
/// weighted) Gram matrices: decomposition of C_X C_Y truncated to k.
PairedDecomposition gram_svd(const GramMatrix& c_x, const GramMatrix& c_y, int k,
                             GramRoute route = GramRoute::svd);

/// Kernel RRR: decomposition of C_X C_Y (C_Y^2 + eta I)^{-1} C_Y.
PairedDecomposition gram_rrr(const GramMatrix& c_x, const GramMatrix& c_y, double eta, int k,
                             GramRoute route = GramRoute::svd);

/// Kernel CCA: decomposition of
/// C_X (C_X^2 + eta I)^{-1} C_X C_Y (C_Y^2 + eta I)^{-1} C_Y.
PairedDecomposition gram_cca(const GramMatrix& c_x, const GramMatrix& c_y, double eta, int k,
                             GramRoute route = GramRoute::svd);

}  // namespace miv
