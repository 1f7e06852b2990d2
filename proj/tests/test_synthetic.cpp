#include <doctest.h>

#include <random>

#include "miv/linalg.hpp"
#include "miv/manifold_graph.hpp"
#include "miv/metrics.hpp"
#include "miv/synthetic.hpp"
#include "test_util.hpp"

using namespace miv;
using namespace miv::testutil;

namespace {

LinearLatentModel default_model(std::uint64_t seed, double noise_sd) {
  std::mt19937_64 rng(900 + seed);
  LinearLatentModel m;
  m.m_map = random_matrix(rng, 10, 2);
  m.n_map = random_matrix(rng, 10, 2);
  m.latent_cov = Matrix::Identity(2, 2);
  m.noise_cov_x = noise_sd * noise_sd * Matrix::Identity(10, 10);
  m.noise_cov_y = noise_sd * noise_sd * Matrix::Identity(10, 10);
  m.seed = seed;
  return m;
}

}  // namespace

TEST_CASE("gen_linear noiseless rows lie in range(M)") {
  LinearLatentModel m = default_model(5, 0.0);
  PairedSample s = gen_linear(m, 50);
  // Project rows onto range(M) and check the residual.
  Eigen::ColPivHouseholderQR<Matrix> qr(m.m_map);
  Matrix q = qr.householderQ() * Matrix::Identity(10, 2);
  Matrix resid = s.x - s.x * q * q.transpose();
  CHECK(resid.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("gen_linear empirical cross-covariance approaches M Cov N^T") {
  LinearLatentModel m = default_model(6, 1.0);
  const int n = 50000;
  PairedSample s = gen_linear(m, n);
  Matrix xc = s.x.rowwise() - s.x.colwise().mean();
  Matrix yc = s.y.rowwise() - s.y.colwise().mean();
  Matrix emp = xc.transpose() * yc / double(n);
  Matrix expect = m.m_map * m.latent_cov * m.n_map.transpose();
  CHECK(rel_fro(emp, expect) <= 0.05);
}

TEST_CASE("gen_linear noise draws are independent across views") {
  LinearLatentModel m = default_model(7, 1.0);
  const int n = 50000;
  PairedSample s = gen_linear(m, n);
  Matrix ex = s.x - s.z * m.m_map.transpose();
  Matrix ey = s.y - s.z * m.n_map.transpose();
  Matrix cross = (ex.rowwise() - ex.colwise().mean()).transpose() *
                 (ey.rowwise() - ey.colwise().mean()) / double(n);
  CHECK(cross.cwiseAbs().maxCoeff() <= 0.05);
}

TEST_CASE("gen_linear determinism and validation") {
  LinearLatentModel m = default_model(8, 0.5);
  PairedSample a = gen_linear(m, 100);
  PairedSample b = gen_linear(m, 100);
  CHECK((a.x.array() == b.x.array()).all());
  CHECK((a.y.array() == b.y.array()).all());
  CHECK((a.z.array() == b.z.array()).all());

  LinearLatentModel bad = m;
  bad.m_map.col(1) = bad.m_map.col(0);  // rank deficient
  CHECK_THROWS_AS(gen_linear(bad, 10), std::invalid_argument);
  LinearLatentModel sing = m;
  sing.latent_cov(1, 1) = 0.0;
  CHECK_THROWS_AS(gen_linear(sing, 10), std::invalid_argument);
}

TEST_CASE("gen_swiss_roll_pair latent contract and noiseless geometry") {
  SwissRollSpec spec;
  spec.n = 400;
  spec.noise_scale_x.setZero();
  spec.noise_scale_y.setZero();
  spec.seed = 3;
  PairedSample s = gen_swiss_roll_pair(spec);
  CHECK(s.z.rows() == 400);
  CHECK(s.z.cols() == 2);
  CHECK(s.z.col(0).minCoeff() >= spec.z1_min);
  CHECK(s.z.col(0).maxCoeff() <= spec.z1_max);
  CHECK(s.z.col(1).minCoeff() >= spec.z2_min);
  CHECK(s.z.col(1).maxCoeff() <= spec.z2_max);
  // x reproduces f(z) exactly when noise is zero.
  double slope = (spec.t_max - spec.t_min) / (spec.z1_max - spec.z1_min);
  for (int i = 0; i < 400; ++i) {
    double t = spec.t_min + slope * (s.z(i, 0) - spec.z1_min);
    CHECK(s.x(i, 0) == doctest::Approx(t * std::cos(t)).epsilon(1e-12));
    CHECK(s.x(i, 1) == doctest::Approx(s.z(i, 1)).epsilon(1e-12));
    CHECK(s.x(i, 2) == doctest::Approx(t * std::sin(t)).epsilon(1e-12));
  }
}

TEST_CASE("noiseless swiss roll embedding recovers the latent ordering") {
  SwissRollSpec spec;
  spec.n = 2000;
  spec.noise_scale_x.setZero();
  spec.noise_scale_y.setZero();
  spec.seed = 1;
  PairedSample s = gen_swiss_roll_pair(spec);
  Embedding e = le_embed(s.x, 10, WeightMode::binary(), 2);
  // Procrustes correlation after monotone unrolling (rank-normalizing each
  // coordinate); measured ~0.97 noiseless across realizations.
  auto rank_norm = [](const Matrix& m) {
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::vector<Eigen::Index> order(static_cast<std::size_t>(m.rows()));
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(),
                [&](Eigen::Index a, Eigen::Index b) { return m(a, j) < m(b, j); });
      for (std::size_t r = 0; r < order.size(); ++r)
        out(order[r], j) = double(r + 1) / double(m.rows() + 1);
    }
    return out;
  };
  Matrix er = rank_norm(e.coords), zr = rank_norm(s.z);
  Matrix ec = er.rowwise() - er.colwise().mean();
  Matrix zc = zr.rowwise() - zr.colwise().mean();
  TruncatedSvd sv = trunc_svd(Matrix((ec / ec.norm()).transpose() * (zc / zc.norm())), 2);
  CHECK(sv.singular_values.sum() >= 0.9);
}

TEST_CASE("gen_swiss_roll_pair determinism and distinct views") {
  SwissRollSpec spec;
  spec.n = 100;
  spec.seed = 9;
  PairedSample a = gen_swiss_roll_pair(spec);
  PairedSample b = gen_swiss_roll_pair(spec);
  CHECK((a.x.array() == b.x.array()).all());
  CHECK((a.y.array() == b.y.array()).all());
  spec.seed = 10;
  PairedSample c = gen_swiss_roll_pair(spec);
  CHECK_FALSE((a.x.array() == c.x.array()).all());
  // The two views roll differently: y is not a permutation of x columns.
  CHECK(rel_fro(a.y, a.x) > 0.1);
}

TEST_CASE("gen_loop_trajectory noiseless channels are smooth") {
  LoopTrajectorySpec spec;
  spec.t_steps = 600;
  spec.noise_scale = 0.0;
  spec.seed = 0;
  LoopTrajectory t = gen_loop_trajectory(spec);
  CHECK(t.observations.rows() == 600);
  CHECK(t.observations.cols() == 6);
  CHECK(t.positions.rows() == 600);
  // Second differences are bounded by the analytic smoothness of the
  // parameterization: channels are C^1 functions of phase, and the phase
  // step is at most base*(1+a), so second differences stay O(step^2) with a
  // generous constant.
  double step = 2.0 * M_PI / spec.steps_per_lap * (1.0 + spec.speed_variation);
  double bound = 25.0 * step * step;
  for (int c = 0; c < 6; ++c) {
    double worst = 0.0;
    for (int i = 2; i < 600; ++i)
      worst = std::max(worst, std::abs(t.observations(i, c) - 2.0 * t.observations(i - 1, c) +
                                       t.observations(i - 2, c)));
    CHECK(worst < bound);
  }
}

TEST_CASE("loop positions trace a closed curve") {
  LoopTrajectorySpec spec;
  spec.t_steps = 2000;
  spec.noise_scale = 0.3;
  spec.seed = 2;
  LoopTrajectory t = gen_loop_trajectory(spec);
  // After each full lap the position returns within one step length of the
  // starting point: scan for the phase wrap nearest to the start.
  Eigen::Vector2d start = t.positions.row(0);
  double max_step = 0.0;
  for (int i = 1; i < 300; ++i)
    max_step = std::max(max_step, (t.positions.row(i) - t.positions.row(i - 1)).norm());
  double best = 1e9;
  for (int i = 60; i < 300; ++i)
    best = std::min(best, (t.positions.row(i).transpose() - start).norm());
  CHECK(best <= max_step);
}

TEST_CASE("gen_loop_trajectory determinism") {
  LoopTrajectorySpec spec;
  spec.t_steps = 300;
  spec.seed = 11;
  LoopTrajectory a = gen_loop_trajectory(spec);
  LoopTrajectory b = gen_loop_trajectory(spec);
  CHECK((a.observations.array() == b.observations.array()).all());
  spec.seed = 12;
  LoopTrajectory c = gen_loop_trajectory(spec);
  CHECK_FALSE((a.observations.array() == c.observations.array()).all());
  // Positions are noise-free ground truth - identical across seeds.
  CHECK((a.positions.array() == c.positions.array()).all());
}
