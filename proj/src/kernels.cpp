#include "miv/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "miv/io.hpp"
#include "miv/linalg.hpp"

namespace miv {

GramMatrix gram(const Dataset& x, const KernelSpec& spec) {
  require(x.rows() >= 2, "gram: need at least two samples");
  require(spec.kind != KernelSpec::Kind::precomputed,
          "gram: precomputed Grams enter via load_gram");
  require_finite(x, "gram");
  const Eigen::Index n = x.rows();
  Matrix g(n, n);
  if (spec.kind == KernelSpec::Kind::linear) {
    g.triangularView<Eigen::Upper>() = x * x.transpose();
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      g(i, i) = 1.0;
      for (Eigen::Index j = i + 1; j < n; ++j)
        g(i, j) = std::exp(-0.5 * spec.gamma * (x.row(i) - x.row(j)).squaredNorm());
    }
  }
  g.triangularView<Eigen::StrictlyLower>() = g.transpose();
  return GramMatrix{std::move(g), false, false};
}

Matrix gram_cross(const Dataset& a, const Dataset& b, const KernelSpec& spec) {
  require(a.cols() == b.cols(), "gram_cross: dimension mismatch");
  require(spec.kind != KernelSpec::Kind::precomputed, "gram_cross: needs an explicit kernel");
  if (spec.kind == KernelSpec::Kind::linear) return a * b.transpose();
  Matrix k(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j)
      k(i, j) = std::exp(-0.5 * spec.gamma * (a.row(i) - b.row(j)).squaredNorm());
  return k;
}

double median_bandwidth(const Dataset& x, std::uint64_t seed) {
  require(x.rows() >= 2, "median_bandwidth: need at least two samples");
  require_finite(x, "median_bandwidth");
  const Eigen::Index n = x.rows();
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  const Eigen::Index cap = 2000;
  if (n > cap) {
    std::mt19937_64 rng(seed);
    for (Eigen::Index i = 0; i < cap; ++i) {
      std::uniform_int_distribution<Eigen::Index> pick(i, n - 1);
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
    }
    idx.resize(static_cast<std::size_t>(cap));
  }
  const std::size_t m = idx.size();
  std::vector<double> dists;
  dists.reserve(m * (m - 1) / 2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      dists.push_back((x.row(idx[i]) - x.row(idx[j])).norm());
  auto mid = dists.begin() + static_cast<std::ptrdiff_t>(dists.size() / 2);
  std::nth_element(dists.begin(), mid, dists.end());
  double med = *mid;
  if (dists.size() % 2 == 0) {
    double lo = *std::max_element(dists.begin(), mid);
    med = 0.5 * (lo + med);
  }
  if (med <= 0.0) throw std::domain_error("median_bandwidth: degenerate data (median distance 0)");
  return 1.0 / (med * med);
}

GramMatrix weighted_center(const GramMatrix& g, const WeightVector& p) {
  require(!g.weighted, "weighted_center: Gram is already weighted");
  require(p.size() == g.size(), "weighted_center: weight length mismatch");
  require(p.entries.allFinite() && (p.entries.array() > 0.0).all(),
          "weighted_center: weights must be finite and positive");
  Matrix c = g.centered ? g.values : miv::double_center(g.values);
  c = p.entries.asDiagonal() * c * p.entries.asDiagonal();
  return GramMatrix{std::move(c), true, true};
}

GramMatrix double_center(const GramMatrix& g) {
  if (g.centered) return g;
  return GramMatrix{miv::double_center(g.values), true, g.weighted};
}

GramMatrix load_gram(const std::string& csv_path) {
  Matrix values = read_csv(csv_path, /*expect_header=*/false);
  require(values.rows() == values.cols(), "load_gram: Gram matrix must be square");
  auto meta = read_json(csv_path + ".json");
  GramMatrix g{std::move(values), meta.value("centered", false), meta.value("weighted", false)};
  double asym = (g.values - g.values.transpose()).cwiseAbs().maxCoeff();
  require(asym <= 1e-9 * std::max(1.0, g.values.cwiseAbs().maxCoeff()),
          "load_gram: matrix is not symmetric");
  return g;
}

void save_gram(const GramMatrix& g, const std::string& csv_path) {
  write_csv(csv_path, g.values, {});
  nlohmann::json meta{{"centered", g.centered}, {"weighted", g.weighted}};
  write_json(csv_path + ".json", meta);
}

}  // namespace miv
