#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "miv/kernels.hpp"
#include "miv/metrics.hpp"
#include "miv/spectral_iv.hpp"
#include "test_util.hpp"

using namespace miv;
using namespace miv::testutil;

namespace {

GramMatrix centered_linear_gram(const Dataset& d) {
  return double_center(gram(d, KernelSpec::linear()));
}

GramMatrix psd_gram(std::mt19937_64& rng, int n, int rank) {
  Matrix m = random_spsd(rng, n, rank);
  return GramMatrix{miv::double_center(m), true, false};
}

}  // namespace

TEST_CASE("two_subspace_pca self covariance in one dimension") {
  std::mt19937_64 rng(41);
  Matrix x = random_matrix(rng, 500, 1) * 2.0;
  TruncatedSvd s = two_subspace_pca(x, x, 1);
  Matrix xc = x.rowwise() - x.colwise().mean();
  double var = xc.squaredNorm() / 500.0;
  CHECK(s.singular_values(0) == doctest::Approx(var).epsilon(1e-12));
  CHECK(std::abs(std::abs(s.left_vectors(0, 0)) - 1.0) < 1e-12);
  CHECK(std::abs(std::abs(s.right_vectors(0, 0)) - 1.0) < 1e-12);
}

TEST_CASE("two_subspace_pca on zero data") {
  Matrix x = Matrix::Zero(20, 3), y = Matrix::Zero(20, 2);
  TruncatedSvd s = two_subspace_pca(x, y, 2);
  CHECK(s.singular_values.cwiseAbs().maxCoeff() == 0.0);
  Matrix x2(10, 2), y2(11, 2);
  x2.setZero();
  y2.setZero();
  CHECK_THROWS_AS(two_subspace_pca(x2, y2, 1), std::invalid_argument);
}

TEST_CASE("two_subspace_pca unbiases against structured noise") {
  // Paired views of a shared latent with strong single-view noise: the
  // cross-covariance SVD finds range(M) where plain PCA locks onto noise.
  std::mt19937_64 rng(42);
  int wins = 0;
  const int seeds = 20;
  for (int rep = 0; rep < seeds; ++rep) {
    const int n = 10000, d = 10, k = 2;
    Matrix m_map = random_matrix(rng, d, k);
    Matrix n_map = random_matrix(rng, d, k);
    Matrix z = random_matrix(rng, n, k);
    // Anisotropic noise: a few axes carry variance above the signal.
    Vector noise_sd_x = Vector::Ones(d), noise_sd_y = Vector::Ones(d);
    noise_sd_x.head(3).setConstant(4.0);
    noise_sd_y.segment(3, 3).setConstant(4.0);
    Matrix x = z * m_map.transpose() + random_matrix(rng, n, d) * noise_sd_x.asDiagonal();
    Matrix y = z * n_map.transpose() + random_matrix(rng, n, d) * noise_sd_y.asDiagonal();

    TruncatedSvd iv = two_subspace_pca(x, y, k);
    double angle_iv = principal_angles(iv.left_vectors, m_map).maxCoeff();
    Matrix xc = x.rowwise() - x.colwise().mean();
    SymmetricSpectrum pca = sym_eig(Matrix(xc.transpose() * xc / double(n)));
    double angle_pca = principal_angles(pca.eigenvectors.leftCols(k), m_map).maxCoeff();
    if (angle_iv < angle_pca) ++wins;
  }
  CHECK(wins >= 19);  // >= 95% of seeds
}

TEST_CASE("linear_rrr matches two_subspace_pca directions for whitened instruments") {
  std::mt19937_64 rng(43);
  const int n = 4000;
  Matrix z = random_matrix(rng, n, 2);
  Matrix x = z * random_matrix(rng, 5, 2).transpose() + 0.1 * random_matrix(rng, n, 5);
  Matrix y = random_matrix(rng, n, 4);  // isotropic: S_YY ~ I
  y += z * random_matrix(rng, 4, 2).transpose();
  // Whiten y exactly so S_YY = I.
  Matrix yc = y.rowwise() - y.colwise().mean();
  Matrix w = sym_inv_sqrt(Matrix(yc.transpose() * yc / double(n)), 0.0);
  Matrix yw = yc * w;
  TruncatedSvd rrr = linear_rrr(x, yw, 1e-12, 2);
  TruncatedSvd psvd = two_subspace_pca(x, yw, 2);
  CHECK(max_coldiff_upto_sign(rrr.left_vectors, psvd.left_vectors) < 1e-6);
}

TEST_CASE("linear_rrr matches the explicit dense formula") {
  std::mt19937_64 rng(44);
  const int n = 200;
  Matrix x = random_matrix(rng, n, 5), y = random_matrix(rng, n, 4);
  double eta = 1e-3;
  TruncatedSvd s = linear_rrr(x, y, eta, 3);
  // Direct oracle: S_XY (S_YY + eta I)^{-1} Y_c^T via plain dense algebra.
  Matrix xc = x.rowwise() - x.colwise().mean();
  Matrix yc = y.rowwise() - y.colwise().mean();
  Matrix sxy = xc.transpose() * yc / double(n);
  Matrix syy = yc.transpose() * yc / double(n);
  Matrix target =
      sxy * (syy + eta * Matrix::Identity(4, 4)).inverse() * yc.transpose();
  TruncatedSvd oracle = trunc_svd(target, 3);
  CHECK((s.singular_values - oracle.singular_values).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(max_coldiff_upto_sign(s.left_vectors, oracle.left_vectors) < 1e-8);
}

TEST_CASE("linear_rrr shrinks with large eta") {
  std::mt19937_64 rng(45);
  Matrix x = random_matrix(rng, 150, 4), y = random_matrix(rng, 150, 4);
  Vector s1 = linear_rrr(x, y, 1.0, 3).singular_values;
  Vector s2 = linear_rrr(x, y, 1e6, 3).singular_values;
  for (int i = 0; i < 3; ++i) CHECK(s2(i) <= s1(i));
}

TEST_CASE("linear_cca self correlation and range") {
  std::mt19937_64 rng(46);
  Matrix x = random_matrix(rng, 300, 4);
  TruncatedSvd self_cca = linear_cca(x, x, 0.0, 4);
  for (int i = 0; i < 4; ++i)
    CHECK(self_cca.singular_values(i) == doctest::Approx(1.0).epsilon(1e-8));
  Matrix y = random_matrix(rng, 300, 3);
  Vector c = linear_cca(x, y, 1e-4, 3).singular_values;
  CHECK(c.maxCoeff() <= 1.0 + 1e-8);
  CHECK(c.minCoeff() >= 0.0);
}

TEST_CASE("independent views have near-zero top canonical correlation") {
  std::mt19937_64 rng(47);
  for (int rep = 0; rep < 3; ++rep) {
    Matrix x = random_matrix(rng, 10000, 4), y = random_matrix(rng, 10000, 4);
    double top = linear_cca(x, y, 1e-6, 1).singular_values(0);
    CHECK(top < 0.1);
  }
}

TEST_CASE("gram_svd on coinciding symmetric PSD Grams documents the route discrepancy") {
  std::mt19937_64 rng(48);
  GramMatrix c = psd_gram(rng, 30, 30);
  SymmetricSpectrum es = sym_eig(c.values);
  PairedDecomposition via_svd = gram_svd(c, c, 4, GramRoute::svd);
  PairedDecomposition via_eig = gram_svd(c, c, 4, GramRoute::eig);
  for (int i = 0; i < 4; ++i) {
    // svd route: singular values of C^2 = eigenvalues squared.
    CHECK(via_svd.spectrum(i) ==
          doctest::Approx(es.eigenvalues(i) * es.eigenvalues(i)).epsilon(1e-8));
    // eig route: sqrt of the eigenvalues of C^2.
    CHECK(via_eig.spectrum(i) == doctest::Approx(es.eigenvalues(i)).epsilon(1e-8));
  }
  CHECK(max_coldiff_upto_sign(via_svd.left_coeffs, via_svd.right_coeffs) < 1e-8);
}

TEST_CASE("gram_svd eig route matches the dense SVD oracle for linear kernels") {
  std::mt19937_64 rng(49);
  const int n = 100;
  Matrix x = random_matrix(rng, n, 5), y = random_matrix(rng, n, 4);
  GramMatrix cx = centered_linear_gram(x), cy = centered_linear_gram(y);
  PairedDecomposition dec = gram_svd(cx, cy, 4, GramRoute::eig);

  Matrix xc = x.rowwise() - x.colwise().mean();
  Matrix yc = y.rowwise() - y.colwise().mean();
  TruncatedSvd dense = trunc_svd(Matrix(xc.transpose() * yc / double(n)), 4);
  // Grams carry no 1/n, so the Gram spectrum is n times the dense one.
  for (int i = 0; i < 4; ++i)
    CHECK(dec.spectrum(i) / n == doctest::Approx(dense.singular_values(i)).epsilon(1e-8));

  // Reconstructed singular vectors w_i = (XH)^T-side coefficients applied to
  // the centered data, already unit length by the coefficient normalization.
  Matrix w_left = xc.transpose() * dec.left_coeffs;    // d1 x k
  Matrix w_right = yc.transpose() * dec.right_coeffs;  // d2 x k
  CHECK(max_coldiff_upto_sign(w_left, dense.left_vectors) < 1e-6);
  CHECK(max_coldiff_upto_sign(w_right, dense.right_vectors) < 1e-6);
}

TEST_CASE("gram_svd unit-norm coefficient invariant on the eig route") {
  std::mt19937_64 rng(50);
  GramMatrix cx = psd_gram(rng, 25, 10), cy = psd_gram(rng, 25, 12);
  PairedDecomposition dec = gram_svd(cx, cy, 3, GramRoute::eig);
  for (int i = 0; i < 3; ++i) {
    double qx = dec.left_coeffs.col(i).dot(cx.values * dec.left_coeffs.col(i));
    double qy = dec.right_coeffs.col(i).dot(cy.values * dec.right_coeffs.col(i));
    CHECK(qx == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(qy == doctest::Approx(1.0).epsilon(1e-8));
  }
  // spectrum^2 matches the (real, non-negative) eigenvalues of C_Y C_X,
  // cross-checked through the nonsymmetric product itself.
  Eigen::EigenSolver<Matrix> es(Matrix(cy.values * cx.values));
  std::vector<double> lam;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    CHECK(std::abs(es.eigenvalues()(i).imag()) < 1e-8);
    lam.push_back(es.eigenvalues()(i).real());
  }
  std::sort(lam.rbegin(), lam.rend());
  for (int i = 0; i < 3; ++i)
    CHECK(dec.spectrum(i) * dec.spectrum(i) == doctest::Approx(lam[i]).epsilon(1e-7));
}

TEST_CASE("gram_svd zero Grams give a zero spectrum") {
  GramMatrix z{Matrix::Zero(8, 8), true, false};
  PairedDecomposition s = gram_svd(z, z, 3, GramRoute::svd);
  CHECK(s.spectrum.cwiseAbs().maxCoeff() == 0.0);
  PairedDecomposition e = gram_svd(z, z, 3, GramRoute::eig);
  CHECK(e.spectrum.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gram_svd input validation") {
  std::mt19937_64 rng(51);
  GramMatrix a = psd_gram(rng, 10, 5);
  GramMatrix b = psd_gram(rng, 12, 5);
  CHECK_THROWS_AS(gram_svd(a, b, 2), std::invalid_argument);
  GramMatrix uncentered{Matrix::Identity(10, 10), false, false};
  CHECK_THROWS_AS(gram_svd(a, uncentered, 2), std::invalid_argument);
  GramMatrix c = psd_gram(rng, 10, 5);
  CHECK_THROWS_AS(gram_svd(a, c, 11), std::invalid_argument);
}

TEST_CASE("gram_rrr identity instrument approximates C_X at tiny eta") {
  std::mt19937_64 rng(52);
  GramMatrix cx = psd_gram(rng, 20, 8);
  GramMatrix identity{Matrix::Identity(20, 20), true, false};
  PairedDecomposition dec = gram_rrr(cx, identity, 1e-10, 5);
  SymmetricSpectrum es = sym_eig(cx.values);
  for (int i = 0; i < 5; ++i)
    CHECK(dec.spectrum(i) ==
          doctest::Approx(std::max(es.eigenvalues(i), 0.0)).epsilon(1e-6));
}

TEST_CASE("gram_rrr matches the finite-dimensional oracle for linear kernels") {
  std::mt19937_64 rng(53);
  const int n = 80;
  Matrix x = random_matrix(rng, n, 5), y = random_matrix(rng, n, 4);
  GramMatrix cx = centered_linear_gram(x), cy = centered_linear_gram(y);
  // Push the Gram operator through the finite-dimensional identities:
  // C_X C_Y (C_Y^2 + eta I)^{-1} C_Y shares its nonzero spectrum with
  // S_XY (S_YY + eta/n^2 ... ) only at matched normalization, so compare
  // against a direct dense evaluation of the same Gram product instead.
  double eta = 1e-3;
  Matrix ny = cy.values * (cy.values * cy.values + eta * Matrix::Identity(n, n)).inverse() *
              cy.values;
  TruncatedSvd oracle = trunc_svd(Matrix(cx.values * ny), 3);
  PairedDecomposition dec = gram_rrr(cx, cy, eta, 3);
  CHECK((dec.spectrum - oracle.singular_values).cwiseAbs().maxCoeff() <
        1e-6 * oracle.singular_values(0));
}

TEST_CASE("gram_rrr reduces to linear RRR for whitened responses at small eta") {
  // The Gram identity sigma(gram) = sqrt(n) sigma(linear) holds when the
  // response view is whitened (X_c^T X_c = n I); the operator regularizes
  // the squared Gram, so the match is exact only as eta -> 0.
  std::mt19937_64 rng(60);
  const int n = 80;
  Matrix z = random_matrix(rng, n, 3);
  Matrix x_raw = z * random_matrix(rng, 5, 3).transpose() + 0.3 * random_matrix(rng, n, 5);
  Matrix y = z * random_matrix(rng, 4, 3).transpose() + 0.3 * random_matrix(rng, n, 4);
  Matrix xc = x_raw.rowwise() - x_raw.colwise().mean();
  Matrix x = xc * sym_inv_sqrt(Matrix(xc.transpose() * xc / double(n)), 0.0);

  GramMatrix cx = centered_linear_gram(x), cy = centered_linear_gram(y);
  PairedDecomposition dec = gram_rrr(cx, cy, 1e-10, 3);
  TruncatedSvd lin = linear_rrr(x, y, 1e-12, 3);
  for (int i = 0; i < 3; ++i)
    CHECK(dec.spectrum(i) / std::sqrt(double(n)) ==
          doctest::Approx(lin.singular_values(i)).epsilon(1e-6));
  // Left singular functions agree as well (eig route reconstructs them).
  PairedDecomposition fdec = gram_rrr(cx, cy, 1e-10, 3, GramRoute::eig);
  Matrix w_left = x.transpose() * fdec.left_coeffs;
  CHECK(max_coldiff_upto_sign(w_left, lin.left_vectors) < 1e-5);
}

TEST_CASE("gram_rrr spectrum shrinks entrywise in eta") {
  std::mt19937_64 rng(54);
  GramMatrix cx = psd_gram(rng, 25, 10), cy = psd_gram(rng, 25, 10);
  Vector prev;
  for (double eta : {1e-4, 1e-2, 1.0, 100.0}) {
    Vector s = gram_rrr(cx, cy, eta, 4).spectrum;
    if (prev.size()) {
      for (int i = 0; i < 4; ++i) CHECK(s(i) <= prev(i) + 1e-12);
    }
    prev = s;
  }
  CHECK_THROWS_AS(gram_rrr(cx, cy, 0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(gram_rrr(cx, cy, -1.0, 2), std::invalid_argument);
}

TEST_CASE("gram_cca self correlation approaches one") {
  std::mt19937_64 rng(55);
  GramMatrix c = psd_gram(rng, 20, 20);
  PairedDecomposition dec = gram_cca(c, c, 1e-12, 4);
  for (int i = 0; i < 4; ++i) CHECK(dec.spectrum(i) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("gram_cca matches linear CCA canonical correlations") {
  std::mt19937_64 rng(56);
  const int n = 150;
  Matrix z = random_matrix(rng, n, 3);
  // Keep every covariance direction at variance >= 2: there the Gram-side
  // damping eta/mu^2 and the whitening-side damping eta/(2 mu) agree to
  // within the comparison tolerance.
  double noise_sd = std::sqrt(2.0);
  Matrix x = z * (2.0 * random_matrix(rng, 5, 3)).transpose() +
             noise_sd * random_matrix(rng, n, 5);
  Matrix y = z * (2.0 * random_matrix(rng, 4, 3)).transpose() +
             noise_sd * random_matrix(rng, n, 4);
  double eta = 1e-4;
  Vector lin = linear_cca(x, y, eta, 3).singular_values;
  // Consumer-applied 1/n so the Gram-side regularizer acts on the covariance
  // scale.
  GramMatrix cx{miv::double_center(Matrix(x * x.transpose())) / n, true, false};
  GramMatrix cy{miv::double_center(Matrix(y * y.transpose())) / n, true, false};
  Vector kern = gram_cca(cx, cy, eta, 3).spectrum;
  CHECK((lin - kern).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("gram_cca spectrum stays in the unit interval") {
  std::mt19937_64 rng(57);
  for (int rep = 0; rep < 10; ++rep) {
    GramMatrix cx = psd_gram(rng, 15, 3 + rep % 5);
    GramMatrix cy = psd_gram(rng, 15, 4 + rep % 4);
    Vector s = gram_cca(cx, cy, 1e-4, 4).spectrum;
    CHECK(s.maxCoeff() <= 1.0 + 1e-6);
    CHECK(s.minCoeff() >= 0.0);
  }
}

TEST_CASE("gram routes are invariant to simultaneous sample reordering") {
  std::mt19937_64 rng(58);
  const int n = 18;
  Matrix x = random_matrix(rng, n, 3), y = random_matrix(rng, n, 3);
  GramMatrix cx = centered_linear_gram(x), cy = centered_linear_gram(y);
  PairedDecomposition base = gram_svd(cx, cy, 3);

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix xp(n, 3), yp(n, 3);
  for (int i = 0; i < n; ++i) {
    xp.row(perm[static_cast<std::size_t>(i)]) = x.row(i);
    yp.row(perm[static_cast<std::size_t>(i)]) = y.row(i);
  }
  PairedDecomposition shuffled =
      gram_svd(centered_linear_gram(xp), centered_linear_gram(yp), 3);
  CHECK((base.spectrum - shuffled.spectrum).cwiseAbs().maxCoeff() < 1e-8 * base.spectrum(0));
  Matrix unperm(n, 3);
  for (int i = 0; i < n; ++i)
    unperm.row(i) = shuffled.left_coeffs.row(perm[static_cast<std::size_t>(i)]);
  CHECK(max_coldiff_upto_sign(unperm, base.left_coeffs) < 1e-7);
}

TEST_CASE("scaling both Grams rescales the svd-route spectrum quadratically") {
  std::mt19937_64 rng(59);
  GramMatrix cx = psd_gram(rng, 16, 6), cy = psd_gram(rng, 16, 6);
  PairedDecomposition base = gram_svd(cx, cy, 3);
  GramMatrix cx2{3.0 * cx.values, true, false}, cy2{3.0 * cy.values, true, false};
  PairedDecomposition scaled = gram_svd(cx2, cy2, 3);
  for (int i = 0; i < 3; ++i)
    CHECK(scaled.spectrum(i) == doctest::Approx(9.0 * base.spectrum(i)).epsilon(1e-10));
  CHECK(max_coldiff_upto_sign(scaled.left_coeffs, base.left_coeffs) < 1e-8);
}
