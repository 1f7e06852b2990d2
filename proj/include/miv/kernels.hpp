#pragma once

#include <cstdint>
#include <string>

#include "miv/types.hpp"

namespace miv {

/// Kernel choice. The precomputed variant carries no parameters; its Gram
/// matrix is supplied externally (see load_gram).
struct KernelSpec {
  enum class Kind { linear, rbf, precomputed };
  Kind kind = Kind::linear;
  double gamma = 0.0;  // rbf bandwidth, > 0

  static KernelSpec linear() { return {Kind::linear, 0.0}; }
  static KernelSpec rbf(double gamma) {
    require(gamma > 0.0, "KernelSpec: rbf gamma must be positive");
    return {Kind::rbf, gamma};
  }
  static KernelSpec precomputed() { return {Kind::precomputed, 0.0}; }
};

/// Pairwise Gram matrix G_ij = K(x_i, x_j). Linear: dot product;
/// rbf: exp(-gamma ||x_i - x_j||^2 / 2). Output is exactly symmetric.
GramMatrix gram(const Dataset& x, const KernelSpec& spec);

/// Kernel row block K(a_i, b_j) for out-of-sample evaluation.
Matrix gram_cross(const Dataset& a, const Dataset& b, const KernelSpec& spec);

/// Median trick: gamma = 1/m^2 with m the median pairwise distance.
/// Subsamples to 2000 points (deterministic in seed) when n > 2000.
double median_bandwidth(const Dataset& x, std::uint64_t seed = 0);

/// P H G H P. Centering is skipped if the input is already centered.
GramMatrix weighted_center(const GramMatrix& g, const WeightVector& p);

/// H G H as a GramMatrix (flag-preserving wrapper over linalg).
GramMatrix double_center(const GramMatrix& g);

/// Precomputed Gram I/O: header-free n x n CSV plus a sidecar JSON
/// {"centered": bool, "weighted": bool} at <path>.json.
GramMatrix load_gram(const std::string& csv_path);
void save_gram(const GramMatrix& g, const std::string& csv_path);

}  // namespace miv
