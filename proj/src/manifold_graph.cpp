#include "miv/manifold_graph.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <vector>

#include "miv/linalg.hpp"

namespace miv {

NeighborhoodGraph knn_adjacency(const Dataset& x, int k_nn, const WeightMode& mode) {
  const Eigen::Index n = x.rows();
  require(n >= 2, "knn_adjacency: need at least two points");
  require(k_nn >= 1 && k_nn < n, "knn_adjacency: need 1 <= k_nn < n");
  require_finite(x, "knn_adjacency");

  // Exact O(n^2 d) search; squared distances, ties by smaller index.
  Vector sq = x.rowwise().squaredNorm();
  std::vector<Eigen::Triplet<double>> edges;
  edges.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(k_nn) * 2);
  std::vector<std::pair<double, Eigen::Index>> cand(static_cast<std::size_t>(n));
  Vector row(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    row.noalias() = (-2.0 * (x * x.row(i).transpose()));
    std::size_t cnt = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      cand[cnt++] = {sq(i) + sq(j) + row(j), j};
    }
    // Lexicographic (distance, index) order makes the selection exact and
    // breaks distance ties by smaller index.
    auto kth = cand.begin() + k_nn;
    std::nth_element(cand.begin(), kth - 1, cand.begin() + static_cast<std::ptrdiff_t>(cnt));
    for (auto it = cand.begin(); it != kth; ++it) {
      const auto& [d2, j] = *it;
      double w = mode.kind == WeightMode::Kind::binary
                     ? 1.0
                     : std::exp(-0.5 * mode.gamma * std::max(d2, 0.0));
      edges.emplace_back(static_cast<int>(i), static_cast<int>(j), w);
      edges.emplace_back(static_cast<int>(j), static_cast<int>(i), w);
    }
  }

  Eigen::SparseMatrix<double> w(n, n);
  // Symmetrization is an OR: duplicates keep the max (equal values anyway).
  w.setFromTriplets(edges.begin(), edges.end(),
                    [](const double& a, const double& b) { return std::max(a, b); });

  NeighborhoodGraph g;
  g.adjacency = std::move(w);
  g.degrees = Vector(g.adjacency * Vector::Ones(n));
  g.k_nn = k_nn;
  g.weight_mode = mode;
  assert((g.degrees.array() > 0.0).all() && "isolated vertex cannot occur with k_nn >= 1");
  return g;
}

std::pair<GramMatrix, WeightVector> le_gram(const NeighborhoodGraph& graph) {
  const Eigen::Index n = graph.adjacency.rows();
  if (!(graph.degrees.array() > 0.0).all())
    throw std::domain_error("le_gram: degenerate graph with zero-degree vertex");
  Matrix g = Matrix(graph.adjacency);
  g -= Matrix(graph.degrees.asDiagonal());
  WeightVector p{graph.degrees.array().rsqrt().matrix()};
  (void)n;
  return {GramMatrix{std::move(g), /*centered=*/true, /*weighted=*/false}, std::move(p)};
}

int count_components(const NeighborhoodGraph& graph) {
  const Eigen::Index n = graph.adjacency.rows();
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  int comps = 0;
  std::vector<Eigen::Index> stack;
  for (Eigen::Index s = 0; s < n; ++s) {
    if (label[static_cast<std::size_t>(s)] >= 0) continue;
    stack.push_back(s);
    label[static_cast<std::size_t>(s)] = comps;
    while (!stack.empty()) {
      Eigen::Index u = stack.back();
      stack.pop_back();
      for (Eigen::SparseMatrix<double>::InnerIterator it(graph.adjacency, u); it; ++it)
        if (label[static_cast<std::size_t>(it.row())] < 0) {
          label[static_cast<std::size_t>(it.row())] = comps;
          stack.push_back(it.row());
        }
    }
    ++comps;
  }
  return comps;
}

Embedding le_embed(const Dataset& x, int k_nn, const WeightMode& mode, int k,
                   EmbeddingScaling scaling) {
  require(k >= 1, "le_embed: target dimension must be positive");
  require(k <= x.rows() - 1, "le_embed: k must be at most n - 1");
  NeighborhoodGraph graph = knn_adjacency(x, k_nn, mode);
  if (count_components(graph) > 1)
    std::cerr << "le_embed: warning: neighborhood graph is disconnected (k_nn=" << k_nn << ")\n";

  const Eigen::Index n = x.rows();
  Vector p = graph.degrees.array().rsqrt();
  // C = S^{-1/2}(W - S)S^{-1/2} = S^{-1/2} W S^{-1/2} - I. The shifted form
  // shares eigenvectors with C, so both paths work on P W P and shift back.
  Eigen::SparseMatrix<double> pwp =
      p.asDiagonal() * graph.adjacency * p.asDiagonal();
  SymmetricSpectrum top;
  if (n <= 1500) {
    Matrix c(pwp);
    c = 0.5 * (c + c.transpose());
    top = sym_eig_topm(c, k + 1);
  } else {
    SymOp op = [&pwp](const Vector& v) { return Vector(pwp * v); };
    top = sym_eig_topm(op, n, k + 1);
  }
  top.eigenvalues.array() -= 1.0;

  Embedding out;
  out.spectrum = top.eigenvalues.segment(1, k);
  Vector scale = scaling == EmbeddingScaling::paper
                     ? Vector(graph.degrees.array().sqrt())
                     : Vector(graph.degrees.array().rsqrt());
  out.coords = scale.asDiagonal() * top.eigenvectors.middleCols(1, k);
  return out;
}

void export_edges(const NeighborhoodGraph& graph, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_edges: cannot open " + path);
  out << "i,j,weight\n" << std::setprecision(17);
  for (int u = 0; u < graph.adjacency.outerSize(); ++u)
    for (Eigen::SparseMatrix<double>::InnerIterator it(graph.adjacency, u); it; ++it)
      if (it.row() < it.col()) out << it.row() << "," << it.col() << "," << it.value() << "\n";
}

}  // namespace miv
