#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "miv/types.hpp"

namespace miv {

/// One measurement row of a metric table.
struct MetricRow {
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string method;
  std::string metric;
  double value = 0.0;
};

/// Per-seed metric table plus aggregates (mean, std, win rate of the primary
/// method against each baseline).
struct MetricReport {
  std::vector<MetricRow> rows;
  nlohmann::json aggregate;
  double runtime_seconds = 0.0;
};

/// Experiment description (parsed from JSON; see parse_experiment_config).
struct ExperimentConfig {
  std::string generator;  // "swiss_roll" | "linear"
  int n = 2000;
  int k = 2;
  std::vector<std::uint64_t> seeds;
  std::vector<double> noise_scales;  // one experiment per entry

  // Two-manifold method configuration (swiss_roll generator).
  std::string source = "graph";  // "graph" | "rbf" | "linear"
  int knn = 5;
  std::string route = "svd";
  std::string scaling = "paper";

  // Linear-generator dimensions.
  int d1 = 10, d2 = 10, latent_k = 2;

  std::vector<std::string> baselines;
  std::vector<std::string> metrics;
  std::string out_dir;
};

ExperimentConfig parse_experiment_config(const nlohmann::json& j);

/// Runs generator -> methods -> metrics for every (noise, seed) cell, writes
/// a long-format CSV (noise, seed, method, metric, value) and a JSON
/// aggregate into out_dir, and returns the report. Fails fast on an invalid
/// configuration; method failures carry seed/method identification.
MetricReport run_experiment(const ExperimentConfig& cfg);

/// Rank-normalizes each column to (0, 1) (monotone unrolling for embeddings
/// whose coordinates are monotone reparameterizations of the latents).
Matrix rank_normalized(const Matrix& m);

/// Procrustes correlation in [0, 1] after optimal alignment (1 = perfect).
double procrustes_correlation(const Matrix& e, const Matrix& z);

}  // namespace miv
