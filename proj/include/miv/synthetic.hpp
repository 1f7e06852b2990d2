#pragma once

#include <cstdint>

#include "miv/types.hpp"

namespace miv {

/// Paired views plus the latent ground truth that generated them.
struct PairedSample {
  Dataset x;
  Dataset y;
  Dataset z;
};

/// x_i = M z_i + eps_i, y_i = N z_i + zeta_i with z_i ~ N(0, latent_cov) and
/// independent Gaussian noises. M, N must have full column rank; latent_cov
/// must be SPD.
struct LinearLatentModel {
  Matrix m_map;        // d1 x k
  Matrix n_map;        // d2 x k
  Matrix latent_cov;   // k x k SPD
  Matrix noise_cov_x;  // d1 x d1 SPSD
  Matrix noise_cov_y;  // d2 x d2 SPSD
  std::uint64_t seed = 0;
};

PairedSample gen_linear(const LinearLatentModel& model, int n);

/// Paired noisy swiss rolls: z uniform on [z1 range] x [z2 range];
/// f rolls (t cos t, z2, t sin t) with t affine in z1 over [t range];
/// g is the reversed roll with permuted axes. Independent per-axis Gaussian
/// noise is added to each view.
struct SwissRollSpec {
  int n = 5000;
  double z1_min = 0.0, z1_max = 24.0;
  double z2_min = 0.0, z2_max = 20.0;
  double t_min = 1.5 * 3.14159265358979323846;
  double t_max = 2.75 * 3.14159265358979323846;
  Eigen::Vector3d noise_scale_x = Eigen::Vector3d::Constant(1.0);
  Eigen::Vector3d noise_scale_y = Eigen::Vector3d::Constant(1.0);
  std::uint64_t seed = 0;
};

PairedSample gen_swiss_roll_pair(const SwissRollSpec& spec);

/// Closed figure-eight trajectory with phase-dependent speed, observed
/// through six noisy IMU-like channels (speed, heading cos/sin, yaw rate,
/// tangential and normal acceleration). Positions are kept as ground truth.
struct LoopTrajectorySpec {
  int t_steps = 2500;
  double radius_x = 2.0;
  double radius_y = 1.0;
  double steps_per_lap = 120.0;
  double speed_variation = 0.35;  // relative phase-speed modulation
  double noise_scale = 0.6;       // noise std as a fraction of channel std
  std::uint64_t seed = 0;
};

struct LoopTrajectory {
  Dataset observations;  // T x 6
  Dataset positions;     // T x 2
};

LoopTrajectory gen_loop_trajectory(const LoopTrajectorySpec& spec);

}  // namespace miv
