#include "miv/dynamics.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>

#include "miv/kernels.hpp"
#include "miv/linalg.hpp"

namespace miv {

WindowedSeries make_windows(const Dataset& series, int len_future, int len_past,
                            const std::vector<int>& indices) {
  const int t_total = static_cast<int>(series.rows());
  const int d = static_cast<int>(series.cols());
  require(len_future >= 1 && len_past >= 1, "make_windows: window lengths must be positive");
  require(!indices.empty(), "make_windows: no indices");
  WindowedSeries w;
  w.len_future = len_future;
  w.len_past = len_past;
  w.indices = indices;
  w.futures.resize(static_cast<Eigen::Index>(indices.size()), len_future * d);
  w.pasts.resize(static_cast<Eigen::Index>(indices.size()), len_past * d);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    int t = indices[r];
    require(t >= len_past && t + len_future <= t_total, "make_windows: window out of range");
    for (int s = 0; s < len_future; ++s)
      w.futures.block(static_cast<Eigen::Index>(r), s * d, 1, d) = series.row(t + s);
    for (int s = 0; s < len_past; ++s)
      w.pasts.block(static_cast<Eigen::Index>(r), s * d, 1, d) = series.row(t - len_past + s);
  }
  return w;
}

WindowedSeries sample_windows(const Dataset& series, int len_future, int len_past, int n,
                              std::uint64_t seed) {
  const int t_total = static_cast<int>(series.rows());
  require(t_total >= len_future + len_past, "sample_windows: series shorter than one window pair");
  const int first = len_past;
  const int last = t_total - len_future;  // inclusive
  const int n_valid = last - first + 1;
  require(n >= 1 && n <= n_valid, "sample_windows: n exceeds the number of valid indices");

  std::vector<int> pool(static_cast<std::size_t>(n_valid));
  std::iota(pool.begin(), pool.end(), first);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < n; ++i) {
    std::uniform_int_distribution<int> pick(i, n_valid - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
  }
  pool.resize(static_cast<std::size_t>(n));
  std::sort(pool.begin(), pool.end());
  return make_windows(series, len_future, len_past, pool);
}

StateSpace discover_state_space(const WindowedSeries& w, const ViewSource& source_futures,
                                const ViewSource& source_pasts, int k, GramRoute route,
                                double lambda) {
  require(k >= 1, "discover_state_space: k must be positive");
  require(lambda >= 0.0, "discover_state_space: lambda must be non-negative");

  StateSpace out;
  out.indices = w.indices;
  out.source_futures = source_futures;
  out.len_future = w.len_future;
  out.len_past = w.len_past;
  out.lambda = lambda;

  // Futures-side Gram, keeping the raw column means for out-of-sample rows.
  GramMatrix c_f;
  WeightVector p_f = WeightVector::ones(w.futures.rows());
  if (source_futures.kind == ViewSource::Kind::kernel) {
    GramMatrix g = gram(w.futures, source_futures.kernel);
    out.gram_col_means = g.values.colwise().mean();
    out.gram_grand_mean = g.values.mean();
    c_f = weighted_center(g, p_f);
    out.supports_oos = true;
    out.train_futures = w.futures;
  } else {
    PreparedView v = prepare_view(w.futures, source_futures);
    c_f = std::move(v.c);
    p_f = std::move(v.p);
  }
  PreparedView vp = prepare_view(w.pasts, source_pasts);

  const bool drop_first = source_futures.kind == ViewSource::Kind::graph &&
                          source_pasts.kind == ViewSource::Kind::graph;
  const int m = drop_first ? k + 1 : k;
  require(m <= c_f.size(), "discover_state_space: k too large for the sample");
  out.decomposition = gram_svd(c_f, vp.c, m, route);

  const int off = drop_first ? 1 : 0;
  Vector lam_sqrt = out.decomposition.spectrum.segment(off, k).cwiseSqrt();
  out.states = p_f.entries.cwiseSqrt().asDiagonal() *
               out.decomposition.left_coeffs.middleCols(off, k) * lam_sqrt.asDiagonal();

  if (out.supports_oos) {
    // Ridge interpolation of the coordinate functions on the centered Gram.
    Matrix b = c_f.values;
    double eta = std::max(lambda * b.trace(), 1e-12);
    b.diagonal().array() += eta;
    out.oos_map = Eigen::LLT<Matrix>(b).solve(out.states);
  }
  return out;
}

Matrix embed_windows(const StateSpace& space, const Matrix& futures) {
  if (!space.supports_oos)
    throw std::runtime_error("embed_windows: graph-source state spaces have no out-of-sample extension");
  require(futures.cols() == space.train_futures.cols(), "embed_windows: window width mismatch");
  Matrix rows = gram_cross(futures, space.train_futures, space.source_futures.kernel);
  Vector row_means = rows.rowwise().mean();
  Matrix centered = rows;
  centered.colwise() -= row_means;
  centered.rowwise() -= space.gram_col_means.transpose();
  centered.array() += space.gram_grand_mean;
  return centered * space.oos_map;
}

Matrix RidgeMap::apply(const Matrix& x) const {
  Matrix scaled = (x.rowwise() - in_mean.transpose()) * in_scale.asDiagonal();
  Matrix out = scaled * weights;
  out.rowwise() += out_mean.transpose();
  return out;
}

namespace {

RidgeMap fit_ridge(const Matrix& inputs, const Matrix& outputs, double lambda) {
  const double n = static_cast<double>(inputs.rows());
  RidgeMap map;
  map.in_mean = inputs.colwise().mean();
  Matrix xc = inputs.rowwise() - map.in_mean.transpose();
  Vector sd = (xc.colwise().squaredNorm() / n).cwiseSqrt().transpose();
  map.in_scale = (sd.array() > 0).select(sd.cwiseInverse(), Vector::Ones(sd.size()));
  xc = xc * map.in_scale.asDiagonal();
  map.out_mean = outputs.colwise().mean();
  Matrix yc = outputs.rowwise() - map.out_mean.transpose();
  Matrix a = xc.transpose() * xc / n;
  a.diagonal().array() += lambda;
  map.weights = Eigen::LDLT<Matrix>(a).solve(xc.transpose() * yc / n);
  return map;
}

}  // namespace

StateSpaceModel fit_state_model(const StateSpace& space, const Matrix& targets,
                                double ridge_lambda, const std::vector<int>& fit_rows) {
  require(ridge_lambda >= 0.0, "fit_state_model: ridge_lambda must be non-negative");
  std::vector<int> rows = fit_rows;
  if (rows.empty()) {
    rows.resize(static_cast<std::size_t>(space.states.rows()));
    std::iota(rows.begin(), rows.end(), 0);
  }
  require(targets.rows() == static_cast<Eigen::Index>(rows.size()),
          "fit_state_model: targets must be row-aligned with the fitted windows");

  const int k = static_cast<int>(space.states.cols());
  Matrix s(static_cast<Eigen::Index>(rows.size()), k);
  for (std::size_t i = 0; i < rows.size(); ++i) s.row(static_cast<Eigen::Index>(i)) = space.states.row(rows[i]);

  StateSpaceModel model;
  model.space = space;
  model.k = k;
  model.ridge_lambda = ridge_lambda;
  model.readout = fit_ridge(s, targets, ridge_lambda);

  // One-step dynamics from consecutive window-start pairs present in the fit.
  std::unordered_map<int, int> by_index;
  for (int r : rows) by_index.emplace(space.indices[static_cast<std::size_t>(r)], r);
  std::vector<std::pair<int, int>> pairs;
  for (int r : rows) {
    auto it = by_index.find(space.indices[static_cast<std::size_t>(r)] + 1);
    if (it != by_index.end()) pairs.emplace_back(r, it->second);
  }
  if (static_cast<int>(pairs.size()) < k + 1)
    throw std::runtime_error("fit_state_model: fewer than k + 1 usable transition pairs");
  Matrix s_now(static_cast<Eigen::Index>(pairs.size()), k);
  Matrix s_next(static_cast<Eigen::Index>(pairs.size()), k);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    s_now.row(static_cast<Eigen::Index>(i)) = space.states.row(pairs[i].first);
    s_next.row(static_cast<Eigen::Index>(i)) = space.states.row(pairs[i].second);
  }
  model.dynamics = fit_ridge(s_now, s_next, ridge_lambda);
  return model;
}

std::vector<Matrix> predict(const StateSpaceModel& model, const WindowedSeries& w_test,
                            int horizon) {
  require(horizon >= 1, "predict: horizon must be positive");

  Matrix states;
  if (model.space.supports_oos) {
    states = embed_windows(model.space, w_test.futures);
  } else {
    // Graph sources: test windows must be part of the training sample.
    std::unordered_map<int, int> by_index;
    for (std::size_t r = 0; r < model.space.indices.size(); ++r)
      by_index.emplace(model.space.indices[r], static_cast<int>(r));
    states.resize(static_cast<Eigen::Index>(w_test.indices.size()), model.k);
    for (std::size_t i = 0; i < w_test.indices.size(); ++i) {
      auto it = by_index.find(w_test.indices[i]);
      if (it == by_index.end())
        throw std::runtime_error(
            "predict: graph-source models reject unseen test points (no out-of-sample extension)");
      states.row(static_cast<Eigen::Index>(i)) = model.space.states.row(it->second);
    }
  }

  std::vector<Matrix> preds;
  preds.reserve(static_cast<std::size_t>(horizon));
  Matrix s = std::move(states);
  for (int h = 0; h < horizon; ++h) {
    s = model.dynamics.apply(s);
    preds.push_back(model.readout.apply(s));
  }
  return preds;
}

}  // namespace miv
