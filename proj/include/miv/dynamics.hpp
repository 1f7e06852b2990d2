#pragma once

#include <cstdint>
#include <vector>

#include "miv/instrumental_eigenmaps.hpp"
#include "miv/spectral_iv.hpp"
#include "miv/types.hpp"

namespace miv {

/// Paired future/past observation windows. Window i starts at time index
/// t_i (0-based row of the source series): futures cover t_i .. t_i+lf-1 and
/// pasts cover t_i-lp .. t_i-1, both flattened time-major.
struct WindowedSeries {
  Matrix futures;
  Matrix pasts;
  std::vector<int> indices;
  int len_future = 0;
  int len_past = 0;
};

/// Builds windows at explicit start indices (each must satisfy
/// lp <= t and t + lf <= T).
WindowedSeries make_windows(const Dataset& series, int len_future, int len_past,
                            const std::vector<int>& indices);

/// Samples n valid start indices uniformly without replacement,
/// deterministically in the seed, and builds their windows.
WindowedSeries sample_windows(const Dataset& series, int len_future, int len_past, int n,
                              std::uint64_t seed);

/// Discovered state space: the futures-side embedding coordinates plus the
/// data needed to embed new windows (explicit-kernel sources only).
struct StateSpace {
  PairedDecomposition decomposition;
  Matrix states;  // n x k, P^{1/2} U_sel Lambda_sel^{1/2}
  std::vector<int> indices;
  ViewSource source_futures;
  int len_future = 0;
  int len_past = 0;
  double lambda = 1e-4;
  // Out-of-sample machinery (kernel futures source).
  bool supports_oos = false;
  Matrix train_futures;
  Matrix oos_map;         // (B + eta I)^{-1} states
  Vector gram_col_means;  // uncentered Gram column means
  double gram_grand_mean = 0.0;
};

/// Cross-covariance state-space discovery: centered (and, for graph sources,
/// weighted and spectrally shifted) Grams for futures and pasts, decomposed
/// by gram_svd; the futures side supplies the state coordinates. lambda
/// regularizes the out-of-sample embedding map.
StateSpace discover_state_space(const WindowedSeries& w, const ViewSource& source_futures,
                                const ViewSource& source_pasts, int k,
                                GramRoute route = GramRoute::svd, double lambda = 1e-4);

/// Embeds new future windows into the state space. Kernel sources only;
/// graph sources have no out-of-sample extension.
Matrix embed_windows(const StateSpace& space, const Matrix& futures);

/// Standardized-input ridge regression map.
struct RidgeMap {
  Vector in_mean, in_scale;
  Matrix weights;
  Vector out_mean;

  Matrix apply(const Matrix& x) const;
};

/// Linear readout and one-step dynamics fitted on the discovered states.
struct StateSpaceModel {
  StateSpace space;
  int k = 0;
  RidgeMap readout;   // state -> target
  RidgeMap dynamics;  // state_t -> state_{t+1}
  double ridge_lambda = 1e-4;
};

/// Fits readout (states -> targets) and dynamics (consecutive-index state
/// pairs) by ridge regression. fit_rows selects which windows participate
/// (default all); targets are row-aligned with fit_rows.
StateSpaceModel fit_state_model(const StateSpace& space, const Matrix& targets,
                                double ridge_lambda,
                                const std::vector<int>& fit_rows = {});

/// Embeds the test windows (kernel sources; graph sources require the test
/// windows to be part of the training sample, matched by start index),
/// iterates the dynamics map and applies the readout at each step. Returns
/// one prediction matrix per horizon step 1..horizon.
std::vector<Matrix> predict(const StateSpaceModel& model, const WindowedSeries& w_test,
                            int horizon);

}  // namespace miv
