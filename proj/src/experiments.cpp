#include "miv/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "miv/instrumental_eigenmaps.hpp"
#include "miv/io.hpp"
#include "miv/kernels.hpp"
#include "miv/linalg.hpp"
#include "miv/manifold_graph.hpp"
#include "miv/metrics.hpp"
#include "miv/spectral_iv.hpp"
#include "miv/synthetic.hpp"

namespace miv {

Matrix rank_normalized(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return m(a, j) < m(b, j); });
    for (std::size_t r = 0; r < order.size(); ++r)
      out(order[r], j) = (static_cast<double>(r) + 1.0) / (static_cast<double>(m.rows()) + 1.0);
  }
  return out;
}

double procrustes_correlation(const Matrix& e, const Matrix& z) {
  Matrix ec = e.rowwise() - e.colwise().mean();
  Matrix zc = z.rowwise() - z.colwise().mean();
  double ne = ec.norm(), nz = zc.norm();
  if (ne == 0.0 || nz == 0.0)
    throw std::domain_error("procrustes_correlation: zero-variance configuration");
  TruncatedSvd s = trunc_svd((ec / ne).transpose() * (zc / nz),
                             static_cast<int>(std::min(e.cols(), z.cols())));
  return std::min(s.singular_values.sum(), 1.0);
}

namespace {

const std::set<std::string> kKnownBaselines = {"le", "kernel_pca", "pca", "two_subspace_pca"};
const std::set<std::string> kKnownMetrics = {"procrustes", "procrustes_dissim", "principal_angle"};

EmbeddingScaling parse_scaling(const std::string& s) {
  if (s == "paper") return EmbeddingScaling::paper;
  if (s == "classic") return EmbeddingScaling::classic;
  throw std::invalid_argument("unknown scaling: " + s);
}

GramRoute parse_route(const std::string& s) {
  if (s == "svd") return GramRoute::svd;
  if (s == "eig") return GramRoute::eig;
  throw std::invalid_argument("unknown route: " + s);
}

Matrix pca_coords(const Dataset& x, int k) {
  Matrix xc = x.rowwise() - x.colwise().mean();
  SymmetricSpectrum es =
      sym_eig_topm(Matrix(xc.transpose() * xc / static_cast<double>(x.rows())), k);
  return xc * es.eigenvectors.leftCols(k);
}

Matrix kpca_coords(const Dataset& x, int k) {
  GramMatrix b = double_center(gram(x, KernelSpec::rbf(median_bandwidth(x))));
  SymmetricSpectrum es = b.size() <= 1500
                             ? sym_eig_topm(b.values, k)
                             : sym_eig_topm([&b](const Vector& v) { return Vector(b.values * v); },
                                            b.size(), k);
  return es.eigenvectors.leftCols(k) *
         es.eigenvalues.head(k).cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

struct SeedOutcome {
  std::map<std::string, Matrix> coords;        // method -> embedding
  std::map<std::string, double> angle_metric;  // method -> largest principal angle
};

}  // namespace

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.generator = j.value("generator", "swiss_roll");
  if (cfg.generator != "swiss_roll" && cfg.generator != "linear")
    throw std::invalid_argument("unknown generator: " + cfg.generator);
  cfg.n = j.value("n", cfg.generator == "swiss_roll" ? 2000 : 10000);
  cfg.k = j.value("k", 2);
  for (const auto& s : j.value("seeds", std::vector<std::uint64_t>{0})) cfg.seeds.push_back(s);
  require(!cfg.seeds.empty(), "experiment config: need at least one seed");
  cfg.noise_scales = j.value("noise_scales", std::vector<double>{j.value("noise", 1.0)});
  cfg.source = j.value("source", "graph");
  if (cfg.source != "graph" && cfg.source != "rbf" && cfg.source != "linear")
    throw std::invalid_argument("unknown twoman source: " + cfg.source);
  cfg.knn = j.value("knn", 5);
  cfg.route = j.value("route", "svd");
  cfg.scaling = j.value("scaling", "paper");
  parse_route(cfg.route);
  parse_scaling(cfg.scaling);
  cfg.d1 = j.value("d1", 10);
  cfg.d2 = j.value("d2", 10);
  cfg.latent_k = j.value("latent_k", 2);
  cfg.baselines = j.value("baselines", cfg.generator == "swiss_roll"
                                           ? std::vector<std::string>{"le"}
                                           : std::vector<std::string>{"pca"});
  for (const auto& b : cfg.baselines)
    if (!kKnownBaselines.count(b)) throw std::invalid_argument("unknown baseline method: " + b);
  cfg.metrics = j.value("metrics", cfg.generator == "swiss_roll"
                                       ? std::vector<std::string>{"procrustes"}
                                       : std::vector<std::string>{"principal_angle"});
  for (const auto& m : cfg.metrics)
    if (!kKnownMetrics.count(m)) throw std::invalid_argument("unknown metric: " + m);
  cfg.out_dir = j.value("out_dir", "miv_experiment");
  return cfg;
}

MetricReport run_experiment(const ExperimentConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  MetricReport report;
  const std::string primary = cfg.generator == "swiss_roll" ? "twoman" : "two_subspace_pca";

  for (double noise : cfg.noise_scales) {
    for (std::uint64_t seed : cfg.seeds) {
      SeedOutcome outcome;
      Dataset z;
      try {
        if (cfg.generator == "swiss_roll") {
          SwissRollSpec spec;
          spec.n = cfg.n;
          spec.noise_scale_x.setConstant(noise);
          spec.noise_scale_y.setConstant(noise);
          spec.seed = seed;
          PairedSample sample = gen_swiss_roll_pair(spec);
          z = sample.z;

          TwoManifoldConfig tm;
          tm.k = cfg.k;
          tm.route = parse_route(cfg.route);
          tm.scaling = parse_scaling(cfg.scaling);
          if (cfg.source == "graph") {
            tm.view_x = ViewSource::make_graph(cfg.knn);
            tm.view_y = ViewSource::make_graph(cfg.knn);
          } else if (cfg.source == "rbf") {
            tm.view_x = ViewSource::make_kernel(KernelSpec::rbf(median_bandwidth(sample.x)));
            tm.view_y = ViewSource::make_kernel(KernelSpec::rbf(median_bandwidth(sample.y)));
          } else {
            tm.view_x = ViewSource::make_kernel(KernelSpec::linear());
            tm.view_y = ViewSource::make_kernel(KernelSpec::linear());
          }
          outcome.coords["twoman"] = instrumental_eigenmaps(sample.x, sample.y, tm).coords_x;
          for (const std::string& b : cfg.baselines) {
            if (b == "le")
              outcome.coords["le"] = le_embed(sample.x, cfg.knn, WeightMode::binary(), cfg.k,
                                              parse_scaling(cfg.scaling))
                                         .coords;
            else if (b == "kernel_pca")
              outcome.coords["kernel_pca"] = kpca_coords(sample.x, cfg.k);
            else if (b == "pca")
              outcome.coords["pca"] = pca_coords(sample.x, cfg.k);
            else
              throw std::invalid_argument("baseline " + b + " needs the linear generator");
          }
        } else {
          LinearLatentModel model;
          std::mt19937_64 map_rng(seed);
          std::normal_distribution<double> gauss;
          auto random_map = [&](int rows, int cols) {
            Matrix m(rows, cols);
            for (int i = 0; i < rows; ++i)
              for (int jj = 0; jj < cols; ++jj) m(i, jj) = gauss(map_rng);
            return m;
          };
          model.m_map = random_map(cfg.d1, cfg.latent_k);
          model.n_map = random_map(cfg.d2, cfg.latent_k);
          model.latent_cov = Matrix::Identity(cfg.latent_k, cfg.latent_k);
          model.noise_cov_x = noise * noise * Matrix::Identity(cfg.d1, cfg.d1);
          model.noise_cov_y = noise * noise * Matrix::Identity(cfg.d2, cfg.d2);
          model.seed = seed;
          PairedSample sample = gen_linear(model, cfg.n);
          z = sample.z;

          TruncatedSvd iv = two_subspace_pca(sample.x, sample.y, cfg.latent_k);
          outcome.angle_metric["two_subspace_pca"] =
              principal_angles(iv.left_vectors, model.m_map).maxCoeff();
          Matrix xc = sample.x.rowwise() - sample.x.colwise().mean();
          outcome.coords["two_subspace_pca"] = xc * iv.left_vectors;
          for (const std::string& b : cfg.baselines) {
            if (b == "pca") {
              Matrix cov = xc.transpose() * xc / static_cast<double>(cfg.n);
              SymmetricSpectrum es = sym_eig_topm(cov, cfg.latent_k);
              outcome.angle_metric["pca"] =
                  principal_angles(es.eigenvectors.leftCols(cfg.latent_k), model.m_map)
                      .maxCoeff();
              outcome.coords["pca"] = xc * es.eigenvectors.leftCols(cfg.latent_k);
            } else if (b == "two_subspace_pca") {
              continue;
            } else {
              throw std::invalid_argument("baseline " + b + " needs the swiss_roll generator");
            }
          }
        }

        for (const std::string& metric : cfg.metrics) {
          if (metric == "principal_angle") {
            for (const auto& [method, value] : outcome.angle_metric)
              report.rows.push_back({noise, seed, method, metric, value});
          } else {
            for (const auto& [method, coords] : outcome.coords) {
              double value = metric == "procrustes"
                                 ? procrustes_error(coords, z)
                                 : 1.0 - procrustes_correlation(rank_normalized(coords),
                                                                rank_normalized(z));
              report.rows.push_back({noise, seed, method, metric, value});
            }
          }
        }
      } catch (const std::exception& ex) {
        throw std::runtime_error("experiment failed at seed " + std::to_string(seed) +
                                 ", noise " + std::to_string(noise) + ": " + ex.what());
      }
    }
  }

  // Aggregates: mean/std per (method, metric) and the win rate of the
  // primary method against each baseline, reduced in seed order.
  std::map<std::pair<std::string, std::string>, std::vector<double>> grouped;
  for (const auto& r : report.rows) grouped[{r.method, r.metric}].push_back(r.value);
  nlohmann::json agg;
  for (const auto& [key, vals] : grouped) {
    double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(vals.size());
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= static_cast<double>(vals.size());
    agg[key.first][key.second] = {{"mean", mean}, {"std", std::sqrt(var)}};
  }
  for (const std::string& metric : cfg.metrics) {
    auto p = grouped.find({primary, metric});
    if (p == grouped.end()) continue;
    for (const auto& b : cfg.baselines) {
      auto q = grouped.find({b, metric});
      if (q == grouped.end() || b == primary) continue;
      int wins = 0;
      for (std::size_t i = 0; i < p->second.size(); ++i)
        if (p->second[i] < q->second[i]) ++wins;
      agg["win_rate"][metric][primary + "_vs_" + b] =
          static_cast<double>(wins) / static_cast<double>(p->second.size());
    }
  }
  report.aggregate = std::move(agg);
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!cfg.out_dir.empty()) {
    // results.csv and aggregate.json are byte-identical across reruns of the
    // same config; the runtime stamp lives in its own file.
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream csv(cfg.out_dir + "/results.csv");
    csv << "noise,seed,method,metric,value\n" << std::setprecision(17);
    for (const auto& r : report.rows)
      csv << r.noise << "," << r.seed << "," << r.method << "," << r.metric << "," << r.value
          << "\n";
    write_json(cfg.out_dir + "/aggregate.json", report.aggregate);
    write_json(cfg.out_dir + "/runtime.json",
               nlohmann::json{{"runtime_seconds", report.runtime_seconds}});
  }
  return report;
}

}  // namespace miv
