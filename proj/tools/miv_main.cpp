// Command-line front end: synthetic data generation, one- and two-manifold
// embeddings, the dynamics pipeline, noise/seed sweeps and report
// aggregation. All outputs are CSV/JSON.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "miv/dynamics.hpp"
#include "miv/experiments.hpp"
#include "miv/instrumental_eigenmaps.hpp"
#include "miv/io.hpp"
#include "miv/kernels.hpp"
#include "miv/manifold_graph.hpp"
#include "miv/metrics.hpp"
#include "miv/synthetic.hpp"

namespace {

using namespace miv;

namespace fs = std::filesystem;

GramRoute route_from(const std::string& s) {
  if (s == "svd") return GramRoute::svd;
  if (s == "eig") return GramRoute::eig;
  throw CLI::ValidationError("--route must be svd or eig");
}

EmbeddingScaling scaling_from(const std::string& s) {
  if (s == "paper") return EmbeddingScaling::paper;
  if (s == "classic") return EmbeddingScaling::classic;
  throw CLI::ValidationError("--scaling must be paper or classic");
}

ViewSource source_from(const std::string& kind, int knn, double gamma, const Dataset& data,
                       const std::string& gram_file) {
  if (kind == "graph") return ViewSource::make_graph(knn);
  if (kind == "linear") return ViewSource::make_kernel(KernelSpec::linear());
  if (kind == "rbf") {
    double g = gamma > 0 ? gamma : median_bandwidth(data);
    return ViewSource::make_kernel(KernelSpec::rbf(g));
  }
  if (kind == "precomputed") return ViewSource::make_precomputed(load_gram(gram_file));
  throw CLI::ValidationError("source must be graph, rbf, linear or precomputed");
}

std::vector<std::string> coord_names(int k, const std::string& prefix) {
  std::vector<std::string> names;
  for (int i = 0; i < k; ++i) names.push_back(prefix + std::to_string(i));
  return names;
}

int cmd_gen(const std::string& type, int n, std::uint64_t seed, double noise,
            const std::string& out_dir) {
  fs::create_directories(out_dir);
  if (type == "swiss") {
    SwissRollSpec spec;
    spec.n = n;
    spec.noise_scale_x.setConstant(noise);
    spec.noise_scale_y.setConstant(noise);
    spec.seed = seed;
    PairedSample s = gen_swiss_roll_pair(spec);
    write_csv(out_dir + "/x.csv", s.x, coord_names(3, "x"));
    write_csv(out_dir + "/y.csv", s.y, coord_names(3, "y"));
    write_csv(out_dir + "/z.csv", s.z, coord_names(2, "z"));
    write_json(out_dir + "/spec.json",
               {{"type", "swiss_roll"},
                {"n", n},
                {"seed", seed},
                {"noise_scale", noise},
                {"z1_range", {spec.z1_min, spec.z1_max}},
                {"z2_range", {spec.z2_min, spec.z2_max}},
                {"t_range", {spec.t_min, spec.t_max}}});
  } else if (type == "linear") {
    LinearLatentModel model;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    model.m_map = Matrix(10, 2);
    model.n_map = Matrix(10, 2);
    for (auto* m : {&model.m_map, &model.n_map})
      for (Eigen::Index i = 0; i < m->rows(); ++i)
        for (Eigen::Index j = 0; j < m->cols(); ++j) (*m)(i, j) = gauss(rng);
    model.latent_cov = Matrix::Identity(2, 2);
    model.noise_cov_x = noise * noise * Matrix::Identity(10, 10);
    model.noise_cov_y = noise * noise * Matrix::Identity(10, 10);
    model.seed = seed;
    PairedSample s = gen_linear(model, n);
    write_csv(out_dir + "/x.csv", s.x, coord_names(10, "x"));
    write_csv(out_dir + "/y.csv", s.y, coord_names(10, "y"));
    write_csv(out_dir + "/z.csv", s.z, coord_names(2, "z"));
    write_csv(out_dir + "/m_map.csv", model.m_map, {});
    write_json(out_dir + "/spec.json",
               {{"type", "linear"}, {"n", n}, {"seed", seed}, {"noise_scale", noise}});
  } else {  // loop
    LoopTrajectorySpec spec;
    spec.t_steps = n;
    spec.noise_scale = noise;
    spec.seed = seed;
    LoopTrajectory t = gen_loop_trajectory(spec);
    Matrix series(t.observations.rows(), 8);
    series << t.observations, t.positions;
    write_csv(out_dir + "/series.csv", series,
              {"speed", "heading_cos", "heading_sin", "yaw_rate", "accel_t", "accel_n", "pos_x",
               "pos_y"});
    write_json(out_dir + "/spec.json",
               {{"type", "loop"}, {"T", n}, {"seed", seed}, {"noise_scale", noise}});
  }
  std::cout << "wrote " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral two-manifold learning toolkit"};
  app.require_subcommand(1);

  std::string type = "swiss", out_dir = "out", input, input_y, gram_file, gram_file_y;
  std::string method = "le", source_x = "graph", source_y = "graph", route = "svd",
              scaling = "paper", config_path, series_path;
  int n = 2000, k = 2, knn = 5, lf = 25, lp = 25, n_windows = 600, horizon = 50;
  std::uint64_t seed = 0;
  double noise = 1.0, gamma = 0.0, eta = 1e-4, ridge = 1e-4;

  auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
  gen->add_option("--type", type, "swiss | linear | loop");
  gen->add_option("--n", n, "sample count (or series length for loop)");
  gen->add_option("--seed", seed);
  gen->add_option("--noise", noise, "noise scale");
  gen->add_option("--out-dir", out_dir);

  auto* embed = app.add_subcommand("embed", "one-manifold embedding (LE or kernel PCA)");
  embed->add_option("--input", input, "dataset CSV (with header)")->required();
  embed->add_option("--method", method, "le | kpca");
  embed->add_option("--k", k);
  embed->add_option("--knn", knn);
  embed->add_option("--gamma", gamma, "rbf bandwidth (0 = median trick)");
  embed->add_option("--scaling", scaling, "paper | classic");
  embed->add_option("--out-dir", out_dir);

  auto* twoman = app.add_subcommand("twoman", "two-manifold embedding of paired views");
  twoman->add_option("--x", input, "view X CSV")->required();
  twoman->add_option("--y", input_y, "view Y CSV")->required();
  twoman->add_option("--source-x", source_x, "graph | rbf | linear | precomputed");
  twoman->add_option("--source-y", source_y, "graph | rbf | linear | precomputed");
  twoman->add_option("--gram-x", gram_file, "precomputed Gram CSV for X");
  twoman->add_option("--gram-y", gram_file_y, "precomputed Gram CSV for Y");
  twoman->add_option("--k", k);
  twoman->add_option("--knn", knn);
  twoman->add_option("--gamma", gamma);
  twoman->add_option("--route", route, "svd | eig");
  twoman->add_option("--scaling", scaling, "paper | classic");
  twoman->add_option("--out-dir", out_dir);

  auto* dyn = app.add_subcommand("dyn", "state-space discovery and prediction");
  dyn->add_option("--series", series_path, "time-series CSV (obs channels + pos_x,pos_y)")
      ->required();
  dyn->add_option("--source", source_x, "graph | rbf | linear");
  dyn->add_option("--k", k);
  dyn->add_option("--knn", knn);
  dyn->add_option("--lf", lf);
  dyn->add_option("--lp", lp);
  dyn->add_option("--n-windows", n_windows);
  dyn->add_option("--ridge", ridge, "ridge regularization lambda");
  dyn->add_option("--horizon", horizon);
  dyn->add_option("--seed", seed);
  dyn->add_option("--out-dir", out_dir);

  auto* sweep = app.add_subcommand("sweep", "noise/seed experiment battery");
  sweep->add_option("--config", config_path, "experiment config JSON")->required();
  sweep->add_option("--out-dir", out_dir, "overrides config out_dir");

  auto* rep = app.add_subcommand("report", "aggregate existing results.csv files");
  rep->add_option("--in-dir", input, "directory containing results.csv")->required();
  rep->add_option("--out-dir", out_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(type, n, seed, noise, out_dir);

    if (embed->parsed()) {
      Dataset x = read_csv(input, true);
      fs::create_directories(out_dir);
      Embedding e;
      if (method == "le") {
        e = le_embed(x, knn, WeightMode::binary(), k, scaling_from(scaling));
      } else if (method == "kpca") {
        double g = gamma > 0 ? gamma : median_bandwidth(x);
        GramMatrix b = miv::double_center(gram(x, KernelSpec::rbf(g)));
        SymmetricSpectrum es = sym_eig_topm(b.values, k);
        e.coords = es.eigenvectors.leftCols(k) *
                   es.eigenvalues.head(k).cwiseMax(0.0).cwiseSqrt().asDiagonal();
        e.spectrum = es.eigenvalues.head(k);
      } else {
        throw CLI::ValidationError("--method must be le or kpca");
      }
      write_csv(out_dir + "/coords.csv", e.coords, coord_names(k, "e"));
      write_json(out_dir + "/embedding.json",
                 {{"method", method},
                  {"k", k},
                  {"knn", knn},
                  {"scaling", scaling},
                  {"spectrum", std::vector<double>(e.spectrum.begin(), e.spectrum.end())}});
      std::cout << "wrote " << out_dir << "\n";
      return 0;
    }

    if (twoman->parsed()) {
      Dataset x = read_csv(input, true);
      Dataset y = read_csv(input_y, true);
      TwoManifoldConfig cfg;
      cfg.view_x = source_from(source_x, knn, gamma, x, gram_file);
      cfg.view_y = source_from(source_y, knn, gamma, y, gram_file_y);
      cfg.k = k;
      cfg.route = route_from(route);
      cfg.scaling = scaling_from(scaling);
      EmbeddingResult r = instrumental_eigenmaps(x, y, cfg);
      fs::create_directories(out_dir);
      write_csv(out_dir + "/coords_x.csv", r.coords_x, coord_names(k, "e"));
      write_csv(out_dir + "/coords_y.csv", r.coords_y, coord_names(k, "e"));
      write_json(out_dir + "/embedding.json",
                 {{"k", k},
                  {"route", route},
                  {"scaling", scaling},
                  {"source_x", source_x},
                  {"source_y", source_y},
                  {"knn", knn},
                  {"spectrum", std::vector<double>(r.spectrum.begin(), r.spectrum.end())},
                  {"hash_x", r.hash_x},
                  {"hash_y", r.hash_y}});
      std::cout << "wrote " << out_dir << "\n";
      return 0;
    }

    if (dyn->parsed()) {
      Matrix series = read_csv(series_path, true);
      require(series.cols() > 2, "dyn: series must carry observation channels plus pos_x,pos_y");
      const int d_obs = static_cast<int>(series.cols()) - 2;
      Dataset obs = series.leftCols(d_obs);
      Dataset pos = series.rightCols(2);
      const int t_total = static_cast<int>(series.rows());
      const int t_train = t_total * 4 / 5;

      WindowedSeries w = sample_windows(obs.topRows(t_train), lf, lp, n_windows, seed);
      ViewSource sf = source_from(source_x, knn, gamma, w.futures, "");
      ViewSource sp = source_from(source_x, knn, gamma, w.pasts, "");

      std::vector<int> anchors;
      for (int t = t_train; t + lf <= t_total && t + horizon < t_total; t += 4)
        anchors.push_back(t);
      require(!anchors.empty(), "dyn: no room for test anchors");

      StateSpace space;
      std::vector<int> fit_rows;
      if (source_x == "graph") {
        // Graph sources are transductive: anchors join the decomposition
        // sample, the model is fitted on training rows only.
        std::vector<int> all = w.indices;
        all.insert(all.end(), anchors.begin(), anchors.end());
        WindowedSeries wa = make_windows(obs, lf, lp, all);
        space = discover_state_space(wa, sf, sp, k, GramRoute::svd, ridge);
        fit_rows.resize(w.indices.size());
        std::iota(fit_rows.begin(), fit_rows.end(), 0);
      } else {
        space = discover_state_space(w, sf, sp, k, GramRoute::svd, ridge);
      }
      Matrix targets(static_cast<Eigen::Index>(w.indices.size()), 2);
      for (std::size_t i = 0; i < w.indices.size(); ++i) targets.row(i) = pos.row(w.indices[i]);
      StateSpaceModel model = fit_state_model(space, targets, ridge, fit_rows);

      WindowedSeries wt = make_windows(obs, lf, lp, anchors);
      std::vector<Matrix> preds = predict(model, wt, horizon);
      Matrix rmse(horizon, 2);
      for (int h = 1; h <= horizon; ++h) {
        double err = 0.0;
        for (std::size_t a = 0; a < anchors.size(); ++a)
          err += (preds[h - 1].row(a) - pos.row(anchors[a] + h)).squaredNorm();
        rmse(h - 1, 0) = h;
        rmse(h - 1, 1) = std::sqrt(err / static_cast<double>(anchors.size()));
      }
      fs::create_directories(out_dir);
      write_csv(out_dir + "/rmse.csv", rmse, {"horizon", "rmse"});
      write_json(out_dir + "/dyn.json", {{"source", source_x},
                                         {"k", k},
                                         {"lf", lf},
                                         {"lp", lp},
                                         {"n_windows", n_windows},
                                         {"ridge", ridge},
                                         {"spectrum", std::vector<double>(
                                                          space.decomposition.spectrum.begin(),
                                                          space.decomposition.spectrum.end())}});
      std::cout << "wrote " << out_dir << "\n";
      return 0;
    }

    if (sweep->parsed()) {
      ExperimentConfig cfg = parse_experiment_config(read_json(config_path));
      if (!out_dir.empty() && out_dir != "out") cfg.out_dir = out_dir;
      MetricReport r = run_experiment(cfg);
      std::cout << r.aggregate.dump(2) << "\n";
      return 0;
    }

    if (rep->parsed()) {
      // Re-aggregate a long-format results.csv (noise,seed,method,metric,value).
      std::ifstream in(input + "/results.csv");
      if (!in) throw std::runtime_error("report: cannot open " + input + "/results.csv");
      std::string line;
      std::getline(in, line);  // header
      std::map<std::pair<std::string, std::string>, std::vector<double>> grouped;
      std::size_t n_rows = 0;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string noise_s, seed_s, method_s, metric_s, value_s;
        std::getline(ss, noise_s, ',');
        std::getline(ss, seed_s, ',');
        std::getline(ss, method_s, ',');
        std::getline(ss, metric_s, ',');
        std::getline(ss, value_s, ',');
        grouped[{method_s, metric_s}].push_back(std::stod(value_s));
        ++n_rows;
      }
      nlohmann::json agg;
      agg["rows"] = n_rows;
      for (const auto& [key, vals] : grouped) {
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= static_cast<double>(vals.size());
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        agg[key.first][key.second] = {{"mean", mean},
                                      {"std", std::sqrt(var / static_cast<double>(vals.size()))},
                                      {"count", vals.size()}};
      }
      fs::create_directories(out_dir);
      write_json(out_dir + "/report.json", agg);
      std::cout << agg.dump(2) << "\n";
      return 0;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
