#include <doctest.h>

#include <random>

#include "miv/metrics.hpp"
#include "test_util.hpp"

using namespace miv;
using namespace miv::testutil;

TEST_CASE("procrustes_error is zero for identical configurations") {
  std::mt19937_64 rng(71);
  Matrix z = random_matrix(rng, 30, 2);
  CHECK(procrustes_error(z, z) < 1e-12);
}

TEST_CASE("procrustes_error is invariant to similarity transforms") {
  std::mt19937_64 rng(72);
  Matrix z = random_matrix(rng, 50, 2);
  double angle = 0.71;
  Matrix rot(2, 2);
  rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  Matrix e = 2.5 * z * rot;
  e.rowwise() += Eigen::RowVector2d(3.0, -1.0);
  CHECK(procrustes_error(e, z) < 1e-10);
  // Reflection is allowed too.
  Matrix flip = Matrix::Identity(2, 2);
  flip(0, 0) = -1.0;
  CHECK(procrustes_error(Matrix(z * flip), z) < 1e-10);
}

TEST_CASE("procrustes_error matches an independent closed-form oracle") {
  std::mt19937_64 rng(73);
  Matrix e = random_matrix(rng, 50, 2), z = random_matrix(rng, 50, 2);
  double got = procrustes_error(e, z);
  // Independent closed form: after unit-normalizing both configurations the
  // optimal similarity alignment leaves residual 1 - (sum of singular
  // values)^2, computed here via Eigen's JacobiSVD.
  Matrix ec = e.rowwise() - e.colwise().mean();
  Matrix zc = z.rowwise() - z.colwise().mean();
  Eigen::JacobiSVD<Matrix> svd((ec / ec.norm()).transpose() * (zc / zc.norm()));
  double c = svd.singularValues().sum();
  double oracle = std::sqrt(std::max(1.0 - c * c, 0.0) / 50.0) * zc.norm();
  CHECK(got == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("procrustes_error rejects degenerate inputs") {
  Matrix z = Matrix::Zero(10, 2);
  Matrix e = Matrix::Random(10, 2);
  CHECK_THROWS_AS(procrustes_error(e, z), std::domain_error);
  CHECK_THROWS_AS(procrustes_error(z, e), std::domain_error);
  Matrix short_z = Matrix::Random(9, 2);
  CHECK_THROWS_AS(procrustes_error(e, short_z), std::invalid_argument);
}

TEST_CASE("principal_angles identical and orthogonal subspaces") {
  std::mt19937_64 rng(74);
  Matrix u = random_matrix(rng, 10, 2);
  Vector zero_angles = principal_angles(u, u);
  CHECK(zero_angles.cwiseAbs().maxCoeff() < 1e-10);

  Matrix a(2, 1), b(2, 1);
  a << 1.0, 0.0;
  b << 0.0, 1.0;
  CHECK(principal_angles(a, b)(0) == doctest::Approx(M_PI / 2).epsilon(1e-12));
}

TEST_CASE("principal_angles matches a grid-search oracle") {
  std::mt19937_64 rng(75);
  Matrix u = random_matrix(rng, 10, 2);
  Matrix m = random_matrix(rng, 10, 3);
  Vector angles = principal_angles(u, m);
  CHECK(angles.size() == 2);
  CHECK(angles(0) <= angles(1));
  CHECK(angles(0) >= 0.0);
  CHECK(angles(1) <= M_PI / 2 + 1e-12);

  // Oracle for the smallest angle: coarse grid over unit vectors in span(u)
  // maximizing the projection onto span(m), then local refinement.
  Eigen::ColPivHouseholderQR<Matrix> qru(u), qrm(m);
  Matrix qu = qru.householderQ() * Matrix::Identity(10, 2);
  Matrix qm = qrm.householderQ() * Matrix::Identity(10, 3);
  auto cos_to_m = [&](double phi) {
    Vector v = std::cos(phi) * qu.col(0) + std::sin(phi) * qu.col(1);
    return (qm.transpose() * v).norm();
  };
  double best_phi = 0.0, best = -1.0;
  for (int i = 0; i < 2000; ++i) {
    double phi = M_PI * i / 2000.0;
    double c = cos_to_m(phi);
    if (c > best) {
      best = c;
      best_phi = phi;
    }
  }
  for (double width = M_PI / 2000.0; width > 1e-12; width *= 0.5) {
    for (double phi : {best_phi - width, best_phi + width}) {
      double c = cos_to_m(phi);
      if (c > best) {
        best = c;
        best_phi = phi;
      }
    }
  }
  CHECK(angles(0) == doctest::Approx(std::acos(std::min(best, 1.0))).epsilon(1e-6));
}

TEST_CASE("principal_angles input validation") {
  std::mt19937_64 rng(76);
  Matrix u = random_matrix(rng, 8, 3);
  Matrix m = random_matrix(rng, 8, 2);
  CHECK_THROWS_AS(principal_angles(u, m), std::invalid_argument);  // k > k'
  Matrix rank_def(8, 2);
  rank_def.col(0) = u.col(0);
  rank_def.col(1) = 2.0 * u.col(0);
  CHECK_THROWS_AS(principal_angles(rank_def, u), std::domain_error);
}
