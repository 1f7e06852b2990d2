#include "miv/synthetic.hpp"

#include <cmath>
#include <random>

#include "miv/linalg.hpp"

namespace miv {

namespace {

Matrix gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> gauss;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = gauss(rng);
  return m;
}

Matrix psd_sqrt(const Matrix& m, const char* what) {
  require(m.rows() == m.cols(), "covariance must be square");
  SymmetricSpectrum es = sym_eig(m);
  if (es.eigenvalues.minCoeff() < -1e-10 * std::max(1.0, es.eigenvalues.cwiseAbs().maxCoeff()))
    throw std::invalid_argument(std::string(what) + ": covariance is not PSD");
  return es.eigenvectors * es.eigenvalues.cwiseMax(0.0).cwiseSqrt().asDiagonal() *
         es.eigenvectors.transpose();
}

void check_full_column_rank(const Matrix& m, const char* what) {
  TruncatedSvd s = trunc_svd(m, static_cast<int>(m.cols()));
  if (s.singular_values.minCoeff() <= 1e-8)
    throw std::invalid_argument(std::string(what) + ": map must have full column rank");
}

}  // namespace

PairedSample gen_linear(const LinearLatentModel& model, int n) {
  require(n >= 1, "gen_linear: n must be positive");
  const Eigen::Index k = model.m_map.cols();
  require(model.n_map.cols() == k && model.latent_cov.rows() == k, "gen_linear: shape mismatch");
  check_full_column_rank(model.m_map, "gen_linear: M");
  check_full_column_rank(model.n_map, "gen_linear: N");
  Matrix lat_sqrt = psd_sqrt(model.latent_cov, "gen_linear: latent_cov");
  if (sym_eig(model.latent_cov).eigenvalues.minCoeff() <= 0.0)
    throw std::invalid_argument("gen_linear: latent_cov must be full rank");
  Matrix nx_sqrt = psd_sqrt(model.noise_cov_x, "gen_linear: noise_cov_x");
  Matrix ny_sqrt = psd_sqrt(model.noise_cov_y, "gen_linear: noise_cov_y");

  std::mt19937_64 rng(model.seed);
  PairedSample out;
  out.z = gaussian_matrix(rng, n, k) * lat_sqrt.transpose();
  out.x = out.z * model.m_map.transpose() +
          gaussian_matrix(rng, n, model.m_map.rows()) * nx_sqrt.transpose();
  out.y = out.z * model.n_map.transpose() +
          gaussian_matrix(rng, n, model.n_map.rows()) * ny_sqrt.transpose();
  return out;
}

PairedSample gen_swiss_roll_pair(const SwissRollSpec& spec) {
  require(spec.n >= 1, "gen_swiss_roll_pair: n must be positive");
  require(spec.z1_max > spec.z1_min && spec.z2_max > spec.z2_min,
          "gen_swiss_roll_pair: latent ranges must be positive");
  require(spec.t_max > spec.t_min, "gen_swiss_roll_pair: t range must be positive");
  require((spec.noise_scale_x.array() >= 0).all() && (spec.noise_scale_y.array() >= 0).all(),
          "gen_swiss_roll_pair: noise scales must be non-negative");

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> u1(spec.z1_min, spec.z1_max);
  std::uniform_real_distribution<double> u2(spec.z2_min, spec.z2_max);
  std::normal_distribution<double> gauss;

  const int n = spec.n;
  PairedSample out;
  out.z.resize(n, 2);
  out.x.resize(n, 3);
  out.y.resize(n, 3);
  const double slope = (spec.t_max - spec.t_min) / (spec.z1_max - spec.z1_min);
  for (int i = 0; i < n; ++i) {
    double z1 = u1(rng), z2 = u2(rng);
    out.z(i, 0) = z1;
    out.z(i, 1) = z2;
    double t = spec.t_min + slope * (z1 - spec.z1_min);
    out.x.row(i) << t * std::cos(t), z2, t * std::sin(t);
    // Second view: reversed affine map and permuted axes.
    double tp = spec.t_min + slope * (spec.z1_max - z1);
    out.y.row(i) << z2, tp * std::cos(tp), tp * std::sin(tp);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 3; ++j) out.x(i, j) += spec.noise_scale_x(j) * gauss(rng);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 3; ++j) out.y(i, j) += spec.noise_scale_y(j) * gauss(rng);
  return out;
}

LoopTrajectory gen_loop_trajectory(const LoopTrajectorySpec& spec) {
  require(spec.t_steps >= 4, "gen_loop_trajectory: series too short");
  require(spec.steps_per_lap > 1.0, "gen_loop_trajectory: bad lap length");
  require(std::abs(spec.speed_variation) < 1.0, "gen_loop_trajectory: |speed_variation| < 1");
  require(spec.noise_scale >= 0.0, "gen_loop_trajectory: noise scale must be non-negative");

  const int t_total = spec.t_steps;
  const double base = 2.0 * M_PI / spec.steps_per_lap;

  // Phase advances with a phase-dependent speed; positions trace the
  // figure-eight (a cos th, b sin 2 th).
  std::vector<double> theta(static_cast<std::size_t>(t_total) + 3, 0.0);
  for (std::size_t t = 0; t + 1 < theta.size(); ++t)
    theta[t + 1] = theta[t] + base * (1.0 + spec.speed_variation * std::cos(theta[t]));

  auto track = [&](double th) {
    return Eigen::Vector2d(spec.radius_x * std::cos(th), spec.radius_y * std::sin(2.0 * th));
  };

  Matrix pos(t_total + 3, 2);
  for (int t = 0; t < t_total + 3; ++t) pos.row(t) = track(theta[static_cast<std::size_t>(t)]);

  // IMU-like channels derived from discrete velocity and heading.
  Matrix obs(t_total, 6);
  for (int t = 0; t < t_total; ++t) {
    Eigen::Vector2d v_prev = pos.row(t + 1) - pos.row(t);
    Eigen::Vector2d v = pos.row(t + 2) - pos.row(t + 1);
    double speed = v.norm();
    double psi = std::atan2(v(1), v(0));
    double omega = std::atan2(v_prev(0) * v(1) - v_prev(1) * v(0), v_prev.dot(v));
    double speed_prev = v_prev.norm();
    obs(t, 0) = speed;
    obs(t, 1) = std::cos(psi);
    obs(t, 2) = std::sin(psi);
    obs(t, 3) = omega;
    obs(t, 4) = speed - speed_prev;  // tangential acceleration
    obs(t, 5) = speed * omega;       // normal acceleration
  }

  LoopTrajectory out;
  out.positions = pos.block(1, 0, t_total, 2);  // aligned with obs rows
  if (spec.noise_scale > 0.0) {
    Vector mean = obs.colwise().mean();
    Vector sd = ((obs.rowwise() - mean.transpose()).colwise().squaredNorm() /
                 static_cast<double>(t_total))
                    .cwiseSqrt();
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < t_total; ++t)
      for (int j = 0; j < 6; ++j) obs(t, j) += spec.noise_scale * sd(j) * gauss(rng);
  }
  out.observations = std::move(obs);
  return out;
}

}  // namespace miv
