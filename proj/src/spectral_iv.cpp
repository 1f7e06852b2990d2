#include "miv/spectral_iv.hpp"

#include <cmath>

namespace miv {

namespace {

Matrix row_centered(const Dataset& x) {
  return x.rowwise() - x.colwise().mean();
}

void check_paired(const Dataset& x, const Dataset& y) {
  require(x.rows() == y.rows(), "paired datasets must have the same sample count");
  require_finite(x, "paired input x");
  require_finite(y, "paired input y");
}

// V f(D) V^T for a symmetric PSD-up-to-noise matrix.
Matrix spectral_apply(const Matrix& m, const std::function<double(double)>& f) {
  SymmetricSpectrum es = sym_eig(m);
  Vector d = es.eigenvalues.unaryExpr(f);
  return es.eigenvectors * d.asDiagonal() * es.eigenvectors.transpose();
}

// Clamp tiny negative spectrum values; anything worse is a numerical fault.
void clamp_spectrum(Vector& s) {
  double scale = std::max(1.0, s.size() ? s.cwiseAbs().maxCoeff() : 0.0);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) < -1e-10 * scale)
      throw std::runtime_error("gram decomposition: spectrum has a significant negative value");
    s(i) = std::max(s(i), 0.0);
  }
}

void check_gram_pair(const GramMatrix& c_x, const GramMatrix& c_y, int k) {
  require(c_x.size() == c_y.size(), "gram pair: size mismatch");
  require(c_x.centered && c_y.centered, "gram pair: both Grams must be centered");
  require(k >= 1 && k <= c_x.size(), "gram pair: need 1 <= k <= n");
  require_finite(c_x.values, "gram pair x");
  require_finite(c_y.values, "gram pair y");
}

// Right eigenvectors of (B A) for symmetric PSD-ish A, B via the symmetric
// reduction B^{1/2} A B^{1/2}; coefficients are rescaled so v^T A v = 1
// (unit-length feature-space functions).
struct SideResult {
  Matrix coeffs;
  Vector eigenvalues;
};

SideResult eig_route_side(const Matrix& a, const Matrix& b, int k) {
  // The square-root reduction only exists for PSD b; indefinite Grams must
  // use the svd route.
  SymmetricSpectrum bs = sym_eig(b);
  double bscale = std::max(1.0, bs.eigenvalues.cwiseAbs().maxCoeff());
  if (bs.eigenvalues.minCoeff() < -1e-8 * bscale)
    throw std::domain_error("gram eig route requires positive-semidefinite Gram matrices");
  Matrix rb = bs.eigenvectors *
              bs.eigenvalues.cwiseMax(0.0).cwiseSqrt().asDiagonal() *
              bs.eigenvectors.transpose();
  Matrix t = rb * a * rb;
  t = 0.5 * (t + t.transpose());
  SymmetricSpectrum es = sym_eig_topm(t, k);
  SideResult out;
  out.eigenvalues = es.eigenvalues.head(k);
  out.coeffs = rb * es.eigenvectors.leftCols(k);
  double scale = std::max(out.eigenvalues.cwiseAbs().maxCoeff(), 1e-300);
  for (int i = 0; i < k; ++i) {
    Vector v = out.coeffs.col(i);
    double q = v.dot(a * v);
    if (out.eigenvalues(i) > 1e-12 * scale && q > 0.0)
      out.coeffs.col(i) = v / std::sqrt(q);
    // Negligible eigenvalue: the function norm is ~0 and no rescaling exists.
  }
  return out;
}

PairedDecomposition gram_pair_decompose(const Matrix& mx, const Matrix& my, int k,
                                        GramRoute route, DecompositionKind kind, double eta) {
  const Eigen::Index n = mx.rows();
  PairedDecomposition out;
  out.kind = kind;
  out.route = route;
  out.regularizer_eta = eta;

  if (route == GramRoute::svd) {
    if (n <= 1200) {
      TruncatedSvd s = trunc_svd(mx * my, k);
      out.left_coeffs = std::move(s.left_vectors);
      out.right_coeffs = std::move(s.right_vectors);
      out.spectrum = std::move(s.singular_values);
    } else {
      // Matrix-free: eigenpairs of (M M^T) with M = mx my, recovering the
      // right vectors from M^T U / sigma.
      SymOp op = [&](const Vector& v) {
        return Vector(mx * (my * (my * (mx * v))));
      };
      SymmetricSpectrum es = sym_eig_topm(op, n, k);
      Vector sigma = es.eigenvalues.cwiseMax(0.0).cwiseSqrt();
      out.left_coeffs = es.eigenvectors;
      out.right_coeffs = Matrix(n, k);
      double smax = std::max(sigma.maxCoeff(), 1e-300);
      for (int i = 0; i < k; ++i) {
        Vector mtu = my * (mx * out.left_coeffs.col(i));
        if (sigma(i) > 1e-12 * smax) {
          out.right_coeffs.col(i) = mtu / sigma(i);
        } else {
          out.right_coeffs.col(i).setZero();  // null direction, pairing undefined
        }
      }
      out.spectrum = sigma;
    }
  } else {
    // Eigendecomposition construction: left coefficients are right
    // eigenvectors of (my mx), right coefficients of (mx my); the shared
    // spectrum is the square root of the eigenvalues.
    SideResult left = eig_route_side(mx, my, k);
    SideResult right = eig_route_side(my, mx, k);
    Vector lam = left.eigenvalues;
    clamp_spectrum(lam);
    out.left_coeffs = std::move(left.coeffs);
    out.right_coeffs = std::move(right.coeffs);
    out.spectrum = lam.cwiseSqrt();
    // Fix relative signs so each pair carries a non-negative singular value.
    for (int i = 0; i < k; ++i) {
      double s = out.left_coeffs.col(i).dot(mx * (my * out.right_coeffs.col(i)));
      if (s < 0) out.right_coeffs.col(i) = -out.right_coeffs.col(i);
    }
  }
  clamp_spectrum(out.spectrum);
  return out;
}

}  // namespace

TruncatedSvd two_subspace_pca(const Dataset& x, const Dataset& y, int k) {
  check_paired(x, y);
  require(k >= 1 && k <= std::min(x.cols(), y.cols()),
          "two_subspace_pca: need 1 <= k <= min(d1, d2)");
  const double n = static_cast<double>(x.rows());
  Matrix sxy = row_centered(x).transpose() * row_centered(y) / n;
  return trunc_svd(sxy, k);
}

TruncatedSvd linear_rrr(const Dataset& x, const Dataset& y, double eta, int k) {
  check_paired(x, y);
  require(eta >= 0.0, "linear_rrr: eta must be non-negative");
  require(k >= 1 && k <= std::min(x.cols(), x.rows()), "linear_rrr: bad k");
  const double n = static_cast<double>(x.rows());
  Matrix xc = row_centered(x), yc = row_centered(y);
  Matrix sxy = xc.transpose() * yc / n;
  Matrix syy = yc.transpose() * yc / n;
  Matrix inv = spectral_apply(syy, [eta](double v) {
    double d = std::max(v, 0.0) + eta;
    if (d <= 0.0) throw std::domain_error("linear_rrr: singular regularized covariance");
    return 1.0 / d;
  });
  Matrix target = sxy * inv * yc.transpose();  // d1 x n
  return trunc_svd(target, k);
}

TruncatedSvd linear_cca(const Dataset& x, const Dataset& y, double eta, int k) {
  check_paired(x, y);
  require(eta >= 0.0, "linear_cca: eta must be non-negative");
  require(k >= 1 && k <= std::min(x.cols(), y.cols()), "linear_cca: bad k");
  const double n = static_cast<double>(x.rows());
  Matrix xc = row_centered(x), yc = row_centered(y);
  Matrix sxx = xc.transpose() * xc / n;
  Matrix syy = yc.transpose() * yc / n;
  Matrix sxy = xc.transpose() * yc / n;
  Matrix white = sym_inv_sqrt(sxx, eta) * sxy * sym_inv_sqrt(syy, eta);
  return trunc_svd(white, k);
}

PairedDecomposition gram_svd(const GramMatrix& c_x, const GramMatrix& c_y, int k,
                             GramRoute route) {
  check_gram_pair(c_x, c_y, k);
  return gram_pair_decompose(c_x.values, c_y.values, k, route, DecompositionKind::gram_svd, 0.0);
}

PairedDecomposition gram_rrr(const GramMatrix& c_x, const GramMatrix& c_y, double eta, int k,
                             GramRoute route) {
  check_gram_pair(c_x, c_y, k);
  require(eta > 0.0, "gram_rrr: eta must be positive");
  Matrix ny = spectral_apply(c_y.values, [eta](double v) { return v * v / (v * v + eta); });
  PairedDecomposition out = gram_pair_decompose(c_x.values, ny, k, route,
                                                DecompositionKind::gram_rrr, eta);
  return out;
}

PairedDecomposition gram_cca(const GramMatrix& c_x, const GramMatrix& c_y, double eta, int k,
                             GramRoute route) {
  check_gram_pair(c_x, c_y, k);
  require(eta > 0.0, "gram_cca: eta must be positive");
  Matrix nx = spectral_apply(c_x.values, [eta](double v) { return v * v / (v * v + eta); });
  Matrix ny = spectral_apply(c_y.values, [eta](double v) { return v * v / (v * v + eta); });
  return gram_pair_decompose(nx, ny, k, route, DecompositionKind::gram_cca, eta);
}

}  // namespace miv
