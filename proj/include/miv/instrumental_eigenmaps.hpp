#pragma once

#include <cstdint>
#include <optional>

#include "miv/kernels.hpp"
#include "miv/manifold_graph.hpp"
#include "miv/spectral_iv.hpp"
#include "miv/types.hpp"

namespace miv {

/// Per-view Gram source: an explicit kernel, a neighborhood graph, or a
/// precomputed Gram matrix loaded from file.
struct ViewSource {
  enum class Kind { kernel, graph, precomputed };
  Kind kind = Kind::kernel;
  KernelSpec kernel;   // kernel source
  int k_nn = 5;        // graph source
  WeightMode mode;     // graph source
  std::optional<GramMatrix> gram;  // precomputed source

  static ViewSource make_kernel(const KernelSpec& spec) {
    ViewSource v;
    v.kind = Kind::kernel;
    v.kernel = spec;
    return v;
  }
  static ViewSource make_graph(int k_nn, const WeightMode& mode = WeightMode::binary()) {
    ViewSource v;
    v.kind = Kind::graph;
    v.k_nn = k_nn;
    v.mode = mode;
    return v;
  }
  static ViewSource make_precomputed(GramMatrix g) {
    ViewSource v;
    v.kind = Kind::precomputed;
    v.gram = std::move(g);
    return v;
  }
};

struct TwoManifoldConfig {
  ViewSource view_x;
  ViewSource view_y;
  int k = 2;
  GramRoute route = GramRoute::svd;
  EmbeddingScaling scaling = EmbeddingScaling::paper;
  /// Discard the leading (trivial) singular direction. Defaults to true when
  /// both views are graph-sourced, false otherwise.
  std::optional<bool> drop_first;
};

/// Paired embeddings of both views plus the spectrum that produced them.
struct EmbeddingResult {
  Matrix coords_x;
  Matrix coords_y;
  Vector spectrum;
  TwoManifoldConfig config;
  std::uint64_t hash_x = 0;
  std::uint64_t hash_y = 0;
};

/// Per-view weighted centered Gram plus the data weights that produced it.
/// Graph views carry the spectral shift C + I = S^{-1/2} W S^{-1/2}, which
/// maps the near-zero signal eigenvalues of the graph Gram to the top of the
/// singular spectrum and makes the trivial direction the exact leading one.
struct PreparedView {
  GramMatrix c;
  WeightVector p;
};

PreparedView prepare_view(const Dataset& data, const ViewSource& source);

/// End-to-end two-manifold embedding: per-view weighted centered Grams,
/// truncated SVD of C_X C_Y, and coordinate scaling P^{1/2} U Lambda^{1/2}
/// per view (drop_first skips the leading singular direction).
EmbeddingResult instrumental_eigenmaps(const Dataset& x, const Dataset& y,
                                       const TwoManifoldConfig& cfg);

}  // namespace miv
