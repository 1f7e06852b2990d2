#include "miv/instrumental_eigenmaps.hpp"

#include <cmath>

#include "miv/io.hpp"

namespace miv {

PreparedView prepare_view(const Dataset& data, const ViewSource& source) {
  switch (source.kind) {
    case ViewSource::Kind::kernel: {
      GramMatrix b = double_center(gram(data, source.kernel));
      WeightVector p = WeightVector::ones(b.size());
      return {weighted_center(GramMatrix{b.values, true, false}, p), std::move(p)};
    }
    case ViewSource::Kind::graph: {
      NeighborhoodGraph graph = knn_adjacency(data, source.k_nn, source.mode);
      auto [g, p] = le_gram(graph);
      GramMatrix c = weighted_center(g, p);
      // Spectral shift: C + I = S^{-1/2} W S^{-1/2}. The graph Gram is
      // negative-semidefinite with its signal eigenvalues at zero, so the
      // unshifted product would hand the top singular values to the
      // high-frequency end. The shift preserves eigenvectors, moves the
      // signal to the top, and makes the trivial direction the exact
      // leading singular pair (discarded by drop_first).
      c.values.diagonal().array() += 1.0;
      return {std::move(c), std::move(p)};
    }
    case ViewSource::Kind::precomputed: {
      require(source.gram.has_value(), "prepare_view: missing precomputed Gram");
      GramMatrix g = *source.gram;
      WeightVector p = WeightVector::ones(g.size());
      if (!g.centered) g = double_center(g);
      return {std::move(g), std::move(p)};
    }
  }
  throw std::logic_error("prepare_view: unreachable");
}

EmbeddingResult instrumental_eigenmaps(const Dataset& x, const Dataset& y,
                                       const TwoManifoldConfig& cfg) {
  require(x.rows() == y.rows(), "instrumental_eigenmaps: paired samples required");
  require(cfg.k >= 1, "instrumental_eigenmaps: k must be positive");

  PreparedView vx = prepare_view(x, cfg.view_x);
  PreparedView vy = prepare_view(y, cfg.view_y);
  require(vx.c.size() == vy.c.size(), "instrumental_eigenmaps: view size mismatch");

  const bool drop_first =
      cfg.drop_first.value_or(cfg.view_x.kind == ViewSource::Kind::graph &&
                              cfg.view_y.kind == ViewSource::Kind::graph);
  const int m = drop_first ? cfg.k + 1 : cfg.k;
  require(m <= vx.c.size(), "instrumental_eigenmaps: k + 1 exceeds sample count");

  PairedDecomposition dec = gram_svd(vx.c, vy.c, m, cfg.route);

  const int off = drop_first ? 1 : 0;
  Vector lam = dec.spectrum.segment(off, cfg.k);
  Vector lam_sqrt = lam.cwiseSqrt();

  auto scale_coords = [&](const Matrix& coeffs, const WeightVector& p) {
    Vector s = cfg.scaling == EmbeddingScaling::paper
                   ? Vector(p.entries.cwiseSqrt())            // P^{1/2}, Algorithm 1 step 4
                   : Vector(p.entries.cwiseInverse());        // P^{-1} = S^{1/2}, LE convention
    return Matrix(s.asDiagonal() * coeffs.middleCols(off, cfg.k) * lam_sqrt.asDiagonal());
  };

  EmbeddingResult out;
  out.coords_x = scale_coords(dec.left_coeffs, vx.p);
  out.coords_y = scale_coords(dec.right_coeffs, vy.p);
  out.spectrum = lam;
  out.config = cfg;
  out.hash_x = dataset_hash(x);
  out.hash_y = dataset_hash(y);
  return out;
}

}  // namespace miv
