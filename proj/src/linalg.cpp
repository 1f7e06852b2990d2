#include "miv/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace miv {

namespace {

// Largest-magnitude entry positive; ties resolved by the first such entry.
void fix_column_signs(Matrix& v) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    Eigen::Index imax = 0;
    double best = 0.0;
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      double a = std::abs(v(i, j));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (v(imax, j) < 0) v.col(j) = -v.col(j);
  }
}

Matrix symmetrized(const Matrix& m) {
  require(m.rows() == m.cols(), "sym_eig: matrix must be square");
  require_finite(m, "sym_eig");
  double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  require(asym <= 1e-8 * std::max(1.0, m.cwiseAbs().maxCoeff()),
          "sym_eig: input is not symmetric within tolerance");
  return 0.5 * (m + m.transpose());
}

}  // namespace

SymmetricSpectrum sym_eig(const Matrix& m) {
  Matrix a = symmetrized(m);
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Vector w(n);
  lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, w.data());
  if (info != 0) throw std::runtime_error("sym_eig: dsyevd failed, info=" + std::to_string(info));
  // dsyevd returns ascending order; flip to descending.
  SymmetricSpectrum out;
  out.eigenvalues = w.reverse();
  out.eigenvectors = a.rowwise().reverse();
  fix_column_signs(out.eigenvectors);
  return out;
}

SymmetricSpectrum sym_eig_topm(const Matrix& m, int m_pairs) {
  Matrix a = symmetrized(m);
  const lapack_int n = static_cast<lapack_int>(a.rows());
  require(m_pairs >= 1 && m_pairs <= n, "sym_eig_topm: bad pair count");
  Vector w(n);
  Matrix z(n, m_pairs);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(std::max<lapack_int>(1, m_pairs)));
  lapack_int found = 0;
  lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0,
                     n - m_pairs + 1, n, 0.0, &found, w.data(), z.data(), n, isuppz.data());
  if (info != 0) throw std::runtime_error("sym_eig_topm: dsyevr failed, info=" + std::to_string(info));
  if (found != m_pairs) throw std::runtime_error("sym_eig_topm: dsyevr returned too few pairs");
  SymmetricSpectrum out;
  out.eigenvalues = w.head(m_pairs).reverse();
  out.eigenvectors = z.rowwise().reverse();
  fix_column_signs(out.eigenvectors);
  return out;
}

SymmetricSpectrum sym_eig_topm(const SymOp& op, Eigen::Index n, int m_pairs, int max_iter,
                               double tol) {
  require(n >= 1 && m_pairs >= 1 && m_pairs <= n, "sym_eig_topm: bad arguments");
  max_iter = static_cast<int>(std::min<Eigen::Index>(max_iter, n));
  const int min_iter = std::min<int>(static_cast<int>(n), std::max(2 * m_pairs + 4, 12));

  // Deterministic start vector.
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss;
  Matrix basis(n, max_iter + 1);
  for (Eigen::Index i = 0; i < n; ++i) basis(i, 0) = gauss(rng);
  basis.col(0).normalize();

  std::vector<double> alpha, beta;  // tridiagonal entries; beta[j] couples j and j+1
  int j = 0;
  Vector ritz_vals;
  Matrix tri_vecs;
  auto solve_tridiag = [&](int dim) {
    Matrix t = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < dim) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(t);
    ritz_vals = es.eigenvalues().reverse();
    tri_vecs = es.eigenvectors().rowwise().reverse();
  };

  double scale = 0.0;
  for (; j < max_iter; ++j) {
    Vector w = op(basis.col(j));
    if (!w.allFinite()) throw std::runtime_error("sym_eig_topm: operator produced non-finite values");
    alpha.push_back(basis.col(j).dot(w));
    // Full reorthogonalization, two passes.
    for (int pass = 0; pass < 2; ++pass)
      w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * w);
    double b = w.norm();
    scale = std::max({scale, std::abs(alpha.back()), b});
    if (b <= 1e-13 * std::max(scale, 1.0)) {
      // Invariant subspace found; restart with a fresh orthogonal direction.
      if (j + 1 >= n) {
        beta.push_back(0.0);
        solve_tridiag(j + 1);
        break;
      }
      Vector r(n);
      for (Eigen::Index i = 0; i < n; ++i) r(i) = gauss(rng);
      for (int pass = 0; pass < 2; ++pass)
        r -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).transpose() * r);
      b = 0.0;  // decouples the restarted block
      w = r.normalized();
      beta.push_back(b);
      basis.col(j + 1) = w;
      continue;
    }
    beta.push_back(b);
    basis.col(j + 1) = w / b;

    if (j + 1 >= min_iter && (j % 5 == 4 || j + 1 == max_iter)) {
      solve_tridiag(j + 1);
      if (static_cast<int>(ritz_vals.size()) >= m_pairs) {
        // Residual bound |beta_j * s_last| per Ritz pair.
        double ok_tol = tol * std::max(scale, 1e-30);
        bool all_ok = true;
        for (int i = 0; i < m_pairs; ++i)
          if (std::abs(b * tri_vecs(j, i)) > ok_tol) {
            all_ok = false;
            break;
          }
        if (all_ok) {
          ++j;
          break;
        }
      }
    }
  }
  if (static_cast<int>(alpha.size()) < m_pairs) throw std::runtime_error("sym_eig_topm: breakdown");
  if (ritz_vals.size() == 0 || tri_vecs.rows() != static_cast<Eigen::Index>(alpha.size()))
    solve_tridiag(static_cast<int>(alpha.size()));

  SymmetricSpectrum out;
  out.eigenvalues = ritz_vals.head(m_pairs);
  out.eigenvectors = basis.leftCols(tri_vecs.rows()) * tri_vecs.leftCols(m_pairs);
  for (Eigen::Index c = 0; c < out.eigenvectors.cols(); ++c) out.eigenvectors.col(c).normalize();
  fix_column_signs(out.eigenvectors);
  return out;
}

TruncatedSvd trunc_svd(const Matrix& m, int k) {
  require_finite(m, "trunc_svd");
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  const lapack_int mn = std::min(rows, cols);
  require(k >= 1 && k <= mn, "trunc_svd: k must satisfy 1 <= k <= min(rows, cols)");

  Matrix a = m;  // destroyed by dgesdd
  Matrix u(rows, mn), vt(mn, cols);
  Vector s(mn);
  lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', rows, cols, a.data(), rows, s.data(),
                                   u.data(), rows, vt.data(), mn);
  if (info != 0) throw std::runtime_error("trunc_svd: dgesdd failed, info=" + std::to_string(info));

  TruncatedSvd out;
  out.left_vectors = u.leftCols(k);
  out.singular_values = s.head(k);
  out.right_vectors = vt.topRows(k).transpose();
  // Keep (u, v) pairs consistent: flip v with u.
  for (int j = 0; j < k; ++j) {
    Eigen::Index imax = 0;
    out.left_vectors.col(j).cwiseAbs().maxCoeff(&imax);
    if (out.left_vectors(imax, j) < 0) {
      out.left_vectors.col(j) = -out.left_vectors.col(j);
      out.right_vectors.col(j) = -out.right_vectors.col(j);
    }
  }
  return out;
}

Matrix sym_inv_sqrt(const Matrix& m, double eta) {
  require(eta >= 0.0, "sym_inv_sqrt: eta must be non-negative");
  SymmetricSpectrum es = sym_eig(m);
  Vector d = es.eigenvalues.cwiseMax(0.0).array() + eta;
  if (d.minCoeff() <= 0.0)
    throw std::domain_error("sym_inv_sqrt: singular input requires eta > 0");
  Vector inv_sqrt = d.array().rsqrt();
  return es.eigenvectors * inv_sqrt.asDiagonal() * es.eigenvectors.transpose();
}

Matrix double_center(const Matrix& g) {
  require(g.rows() == g.cols(), "double_center: matrix must be square");
  require_finite(g, "double_center");
  const double n = static_cast<double>(g.rows());
  Vector row_means = g.rowwise().mean();
  Vector col_means = g.colwise().mean();
  double grand = g.sum() / (n * n);
  Matrix out = g;
  out.colwise() -= row_means;
  out.rowwise() -= col_means.transpose();
  out.array() += grand;
  return out;
}

}  // namespace miv
