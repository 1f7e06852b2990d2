#pragma once

#include <Eigen/SparseCore>

#include <string>
#include <utility>

#include "miv/types.hpp"

namespace miv {

/// Edge weighting for the neighborhood graph.
struct WeightMode {
  enum class Kind { binary, heat };
  Kind kind = Kind::binary;
  double gamma = 1.0;  // heat kernel bandwidth

  static WeightMode binary() { return {Kind::binary, 0.0}; }
  static WeightMode heat(double gamma) {
    require(gamma > 0.0, "WeightMode: heat gamma must be positive");
    return {Kind::heat, gamma};
  }
};

/// Symmetric kNN graph: W_ij > 0 iff i is among the k_nn nearest neighbors of
/// j or vice versa. Degrees are the row sums of W (diagonal of S).
struct NeighborhoodGraph {
  Eigen::SparseMatrix<double> adjacency;
  Vector degrees;
  int k_nn = 0;
  WeightMode weight_mode;
};

/// Brute-force exact kNN graph (Euclidean metric, distance ties broken by
/// smaller index). Binary mode sets weight 1, heat mode exp(-gamma d^2 / 2).
NeighborhoodGraph knn_adjacency(const Dataset& x, int k_nn, const WeightMode& mode);

/// The Laplacian-eigenmaps Gram/weight pair: G = W - S (already centered) and
/// P with entries degrees^{-1/2}.
std::pair<GramMatrix, WeightVector> le_gram(const NeighborhoodGraph& graph);

/// Embedding scaling convention. `paper` multiplies eigenvectors by S^{1/2};
/// `classic` uses the generalized-eigenvector convention S^{-1/2}.
enum class EmbeddingScaling { paper, classic };

/// One-view spectral embedding with its spectrum.
struct Embedding {
  Matrix coords;
  Vector spectrum;
};

/// Laplacian Eigenmaps: eigendecompose C = S^{-1/2}(W - S)S^{-1/2}, drop the
/// trivial top eigenvector, scale the next k per the chosen convention.
/// Warns (stderr) when the graph is disconnected; the embedding is still
/// produced.
Embedding le_embed(const Dataset& x, int k_nn, const WeightMode& mode, int k,
                   EmbeddingScaling scaling = EmbeddingScaling::paper);

/// Number of connected components of the graph.
int count_components(const NeighborhoodGraph& graph);

/// CSV edge list (i, j, weight) with i < j, for inspection.
void export_edges(const NeighborhoodGraph& graph, const std::string& path);

}  // namespace miv
