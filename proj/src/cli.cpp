#include "shapestat/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "shapestat/circle.hpp"
#include "shapestat/dataset_io.hpp"
#include "shapestat/experiments.hpp"
#include "shapestat/report.hpp"

namespace shapestat {

namespace {

using Clock = std::chrono::steady_clock;

ShapeSpace make_space(const std::string& name, int m, int k) {
  if (name == "kendall") {
    return ShapeSpace(m, k, Group::Rotations);
  }
  if (name == "reflection") {
    return ShapeSpace(m, k, Group::RotationsAndReflections);
  }
  throw Error("unknown space: " + name + " (expected kendall or reflection)");
}

DatasetFile load(const std::string& path, const std::string& format) {
  DatasetFormat fmt;
  if (format == "auto") {
    fmt = format_from_path(path);
  } else if (format == "json") {
    fmt = DatasetFormat::Json;
  } else if (format == "csv") {
    fmt = DatasetFormat::Csv;
  } else {
    throw Error("unknown format: " + format);
  }
  return load_dataset(path, fmt);
}

void emit(const nlohmann::json& envelope, const std::string& out_path, bool pretty,
          std::ostream& fallback) {
  std::ofstream file;
  std::ostream* sink = &fallback;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      throw Error("cannot open output file: " + out_path);
    }
    sink = &file;
  }
  if (pretty) {
    *sink << envelope.dump(2) << "\n";
  } else {
    *sink << envelope.dump() << "\n";
  }
}

struct CommonOptions {
  std::string in_path;
  std::string out_path;
  std::string format = "auto";
  std::string space = "kendall";
  double tol = 1e-10;
  int max_iter = 1000;
  int restarts = 1;
  double rank_tol = 1e-9;
  bool pretty = false;
};

void add_mean_options(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--tol", opt.tol, "convergence tolerance (shape distance)");
  cmd->add_option("--max-iter", opt.max_iter, "iteration budget");
  cmd->add_option("--restarts", opt.restarts, "number of sample-point restarts");
  cmd->add_option("--rank-tol", opt.rank_tol, "relative rank tolerance");
}

nlohmann::json common_echo(const CommonOptions& opt) {
  nlohmann::json j;
  j["in"] = opt.in_path;
  j["format"] = opt.format;
  j["space"] = opt.space;
  j["tol"] = opt.tol;
  j["max_iter"] = opt.max_iter;
  j["restarts"] = opt.restarts;
  j["rank_tol"] = opt.rank_tol;
  return j;
}

MeanEstimate compute_mean(const std::string& type, const Sample& sample,
                          const ShapeSpace& space, const MeanOptions& mopt, int rank) {
  if (type == "intrinsic") {
    return intrinsic_mean(sample, space, mopt);
  }
  if (type == "ziezold") {
    return ziezold_mean(sample, space, mopt);
  }
  if (type == "procrustes") {
    return full_procrustes_mean(sample, space, mopt);
  }
  if (type == "schoenberg-orth" || type == "schoenberg-central") {
    const int r = rank > 0 ? rank : space.m;
    return schoenberg_mean(sample, space, r,
                           type == "schoenberg-orth" ? SchoenbergProjectionKind::Orthogonal
                                                     : SchoenbergProjectionKind::Central);
  }
  throw Error("unknown mean type: " + type);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Statistics on Kendall's shape spaces"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  // ----- mean ------------------------------------------------------------
  auto* mean_cmd = app.add_subcommand("mean", "compute a mean shape of a dataset");
  CommonOptions mean_opt;
  std::string mean_type = "ziezold";
  int mean_rank = 0;
  mean_cmd->add_option("--type", mean_type,
                       "intrinsic|ziezold|procrustes|schoenberg-orth|schoenberg-central");
  mean_cmd->add_option("--space", mean_opt.space, "kendall|reflection");
  mean_cmd->add_option("--rank", mean_rank, "Schoenberg projection rank (0 = m)");
  mean_cmd->add_option("--in", mean_opt.in_path, "input dataset")->required();
  mean_cmd->add_option("--out", mean_opt.out_path, "output file (default stdout)");
  mean_cmd->add_option("--format", mean_opt.format, "json|csv|auto");
  mean_cmd->add_flag("--pretty", mean_opt.pretty, "indent the JSON report");
  add_mean_options(mean_cmd, mean_opt);

  // ----- dist ------------------------------------------------------------
  auto* dist_cmd = app.add_subcommand("dist", "pairwise shape distances of a dataset");
  CommonOptions dist_opt;
  std::string dist_metric = "intrinsic";
  dist_cmd->add_option("--metric", dist_metric, "intrinsic|ziezold|procrustes");
  dist_cmd->add_option("--space", dist_opt.space, "kendall|reflection");
  dist_cmd->add_option("--in", dist_opt.in_path, "input dataset")->required();
  dist_cmd->add_option("--out", dist_opt.out_path, "output file (default stdout)");
  dist_cmd->add_option("--format", dist_opt.format, "json|csv|auto");
  dist_cmd->add_flag("--pretty", dist_opt.pretty, "indent the JSON report");

  // ----- tangent ---------------------------------------------------------
  auto* tangent_cmd = app.add_subcommand("tangent", "tangent coordinates at a mean");
  CommonOptions tangent_opt;
  std::string tangent_kind = "residual";
  std::string tangent_base = "intrinsic";
  int tangent_rank = 0;
  tangent_cmd->add_option("--kind", tangent_kind, "intrinsic|residual");
  tangent_cmd->add_option("--base", tangent_base, "mean type used as base point");
  tangent_cmd->add_option("--rank", tangent_rank, "Schoenberg base rank (0 = m)");
  tangent_cmd->add_option("--space", tangent_opt.space, "kendall|reflection");
  tangent_cmd->add_option("--in", tangent_opt.in_path, "input dataset")->required();
  tangent_cmd->add_option("--out", tangent_opt.out_path, "output file (default stdout)");
  tangent_cmd->add_option("--format", tangent_opt.format, "json|csv|auto");
  tangent_cmd->add_flag("--pretty", tangent_opt.pretty, "indent the JSON report");
  add_mean_options(tangent_cmd, tangent_opt);

  // ----- test2 -----------------------------------------------------------
  auto* test2_cmd = app.add_subcommand("test2", "two-sample Hotelling T^2 test");
  CommonOptions test2_opt;
  std::string test2_a, test2_b;
  std::string test2_kind = "residual";
  std::string test2_base = "intrinsic";
  double test2_level = 0.05;
  int test2_max_components = -1;
  test2_cmd->add_option("file_a", test2_a, "first sample dataset")->required();
  test2_cmd->add_option("file_b", test2_b, "second sample dataset")->required();
  test2_cmd->add_option("--level", test2_level, "significance level");
  test2_cmd->add_option("--max-components", test2_max_components,
                        "PCA reduction cap (-1 = n1+n2-3)");
  test2_cmd->add_option("--kind", test2_kind, "intrinsic|residual");
  test2_cmd->add_option("--base", test2_base, "mean type for the pooled base point");
  test2_cmd->add_option("--space", test2_opt.space, "kendall|reflection");
  test2_cmd->add_option("--out", test2_opt.out_path, "output file (default stdout)");
  test2_cmd->add_option("--format", test2_opt.format, "json|csv|auto");
  test2_cmd->add_flag("--pretty", test2_opt.pretty, "indent the JSON report");
  add_mean_options(test2_cmd, test2_opt);

  // ----- ratio -----------------------------------------------------------
  auto* ratio_cmd = app.add_subcommand("ratio", "1:3 mean-proximity report");
  CommonOptions ratio_opt;
  ratio_cmd->add_option("--space", ratio_opt.space, "kendall|reflection");
  ratio_cmd->add_option("--in", ratio_opt.in_path, "input dataset")->required();
  ratio_cmd->add_option("--out", ratio_opt.out_path, "output file (default stdout)");
  ratio_cmd->add_option("--format", ratio_opt.format, "json|csv|auto");
  ratio_cmd->add_flag("--pretty", ratio_opt.pretty, "indent the JSON report");
  add_mean_options(ratio_cmd, ratio_opt);

  // ----- sim-classify ----------------------------------------------------
  auto* sim_cmd = app.add_subcommand("sim-classify", "cube vs pyramid discrimination study");
  SimulationConfig sim_cfg;
  std::string sim_methods = "intrinsic-intrinsic,intrinsic-residual,ziezold,schoenberg";
  std::string sim_out;
  std::string sim_replicate_csv;
  bool sim_pretty = false;
  sim_cmd->add_option("--epsilon", sim_cfg.epsilon, "pyramid height parameter");
  sim_cmd->add_option("--sigma2", sim_cfg.sigma2, "landmark noise variance");
  sim_cmd->add_option("--n-per-group", sim_cfg.n_per_group, "observations per group");
  sim_cmd->add_option("--replicates", sim_cfg.replicates, "Monte Carlo replicates");
  sim_cmd->add_option("--level", sim_cfg.level, "significance level");
  sim_cmd->add_option("--seed", sim_cfg.seed, "master seed");
  sim_cmd->add_option("--max-components", sim_cfg.max_components,
                      "PCA reduction cap (-1 = study default)");
  sim_cmd->add_option("--mean-types", sim_methods, "comma list of methods");
  sim_cmd->add_option("--replicate-csv", sim_replicate_csv,
                      "also write per-replicate outcomes to this CSV file");
  sim_cmd->add_option("--out", sim_out, "output file (default stdout)");
  sim_cmd->add_flag("--pretty", sim_pretty, "indent the JSON report");

  // ----- demo ------------------------------------------------------------
  auto* demo_cmd = app.add_subcommand("demo", "worked examples from the library");
  std::string demo_which;
  double demo_phi = 0.05, demo_beta = 0.3, demo_gamma = M_PI / 2;
  int demo_m = 3, demo_k = 8, demo_repeats = 1;
  std::uint64_t demo_seed = 0;
  std::string demo_n_values = "1,2,3,100";
  std::string demo_out;
  bool demo_pretty = false;
  demo_cmd->add_option("which", demo_which, "counterexample|blindness|circle-means|rank-law")
      ->required();
  demo_cmd->add_option("--phi", demo_phi, "blindness: embedding angle");
  demo_cmd->add_option("--beta", demo_beta, "blindness: offset angle");
  demo_cmd->add_option("--gamma", demo_gamma, "circle-means: second mass angle");
  demo_cmd->add_option("--m", demo_m, "rank-law: dimension");
  demo_cmd->add_option("--k", demo_k, "rank-law: landmarks");
  demo_cmd->add_option("--n-values", demo_n_values, "rank-law: comma list of sample sizes");
  demo_cmd->add_option("--seed", demo_seed, "rank-law: seed");
  demo_cmd->add_option("--repeats", demo_repeats, "rank-law: draws per sample size");
  demo_cmd->add_option("--out", demo_out, "output file (default stdout)");
  demo_cmd->add_flag("--pretty", demo_pretty, "indent the JSON report");

  std::vector<const char*> argv;
  argv.push_back("shapestat");
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    err << app.help();
    return 2;
  }

  const auto started = Clock::now();
  auto elapsed_ms = [&started] {
    return std::chrono::duration<double, std::milli>(Clock::now() - started).count();
  };

  try {
    if (mean_cmd->parsed()) {
      const DatasetFile data = load(mean_opt.in_path, mean_opt.format);
      const Sample sample = dataset_sample(data);
      const ShapeSpace space = make_space(mean_opt.space, data.m, data.k);
      const MeanOptions mopt{mean_opt.tol, mean_opt.max_iter, mean_opt.restarts};
      MeanEstimate est = compute_mean(mean_type, sample, space, mopt, mean_rank);
      est.rank = rank_of(est.representative, mean_opt.rank_tol);
      est.regularity = regularity(est.representative, space, mean_opt.rank_tol);
      nlohmann::json echo = common_echo(mean_opt);
      echo["type"] = mean_type;
      echo["rank"] = mean_rank;
      emit(make_envelope("mean", echo, to_json(est), {{"total", elapsed_ms()}}),
           mean_opt.out_path, mean_opt.pretty, out);
      return 0;
    }

    if (dist_cmd->parsed()) {
      const DatasetFile data = load(dist_opt.in_path, dist_opt.format);
      const Sample sample = dataset_sample(data);
      const ShapeSpace space = make_space(dist_opt.space, data.m, data.k);
      double (*metric)(const PreShape&, const PreShape&, const ShapeSpace&) = nullptr;
      if (dist_metric == "intrinsic") {
        metric = intrinsic_distance;
      } else if (dist_metric == "ziezold") {
        metric = ziezold_distance;
      } else if (dist_metric == "procrustes") {
        metric = procrustes_distance;
      } else {
        throw Error("unknown metric: " + dist_metric);
      }
      const int n = sample.size();
      Eigen::MatrixXd distances = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          distances(i, j) = distances(j, i) =
              metric(sample.points[i], sample.points[j], space);
        }
      }
      nlohmann::json payload;
      payload["metric"] = dist_metric;
      payload["distances"] = matrix_to_json(distances);
      nlohmann::json echo = common_echo(dist_opt);
      echo["metric"] = dist_metric;
      emit(make_envelope("dist", echo, payload, {{"total", elapsed_ms()}}),
           dist_opt.out_path, dist_opt.pretty, out);
      return 0;
    }

    if (tangent_cmd->parsed()) {
      const DatasetFile data = load(tangent_opt.in_path, tangent_opt.format);
      const Sample sample = dataset_sample(data);
      const ShapeSpace space = make_space(tangent_opt.space, data.m, data.k);
      const MeanOptions mopt{tangent_opt.tol, tangent_opt.max_iter, tangent_opt.restarts};
      const MeanEstimate base = compute_mean(tangent_base, sample, space, mopt, tangent_rank);
      const TangentKind kind = tangent_kind == "intrinsic" ? TangentKind::IntrinsicCoords
                               : tangent_kind == "residual"
                                   ? TangentKind::ResidualCoords
                                   : throw Error("unknown kind: " + tangent_kind);
      const TangentSample coords =
          tangent_coordinates(sample, base.representative, kind, space);
      nlohmann::json echo = common_echo(tangent_opt);
      echo["kind"] = tangent_kind;
      echo["base"] = tangent_base;
      emit(make_envelope("tangent", echo, to_json(coords), {{"total", elapsed_ms()}}),
           tangent_opt.out_path, tangent_opt.pretty, out);
      return 0;
    }

    if (test2_cmd->parsed()) {
      const DatasetFile data_a = load(test2_a, test2_opt.format);
      const DatasetFile data_b = load(test2_b, test2_opt.format);
      if (data_a.m != data_b.m || data_a.k != data_b.k) {
        throw DimensionMismatch("the two samples have different landmark dimensions");
      }
      const Sample sample_a = dataset_sample(data_a);
      const Sample sample_b = dataset_sample(data_b);
      std::vector<PreShape> pooled = sample_a.points;
      pooled.insert(pooled.end(), sample_b.points.begin(), sample_b.points.end());
      const Sample pooled_sample(std::move(pooled));
      const ShapeSpace space = make_space(test2_opt.space, data_a.m, data_a.k);
      const MeanOptions mopt{test2_opt.tol, test2_opt.max_iter, test2_opt.restarts};
      const MeanEstimate base = compute_mean(test2_base, pooled_sample, space, mopt, 0);
      const TangentKind kind = test2_kind == "intrinsic" ? TangentKind::IntrinsicCoords
                               : test2_kind == "residual"
                                   ? TangentKind::ResidualCoords
                                   : throw Error("unknown kind: " + test2_kind);
      const TangentSample ta = tangent_coordinates(sample_a, base.representative, kind, space);
      const TangentSample tb = tangent_coordinates(sample_b, base.representative, kind, space);
      const TestReport report = hotelling_two_sample(ta, tb, test2_level, test2_max_components);
      nlohmann::json echo = common_echo(test2_opt);
      echo["file_a"] = test2_a;
      echo["file_b"] = test2_b;
      echo["level"] = test2_level;
      echo["max_components"] = test2_max_components;
      echo["kind"] = test2_kind;
      echo["base"] = test2_base;
      echo.erase("in");
      emit(make_envelope("test2", echo, to_json(report), {{"total", elapsed_ms()}}),
           test2_opt.out_path, test2_opt.pretty, out);
      return 0;
    }

    if (ratio_cmd->parsed()) {
      const DatasetFile data = load(ratio_opt.in_path, ratio_opt.format);
      const Sample sample = dataset_sample(data);
      const ShapeSpace space = make_space(ratio_opt.space, data.m, data.k);
      const MeanOptions mopt{ratio_opt.tol, ratio_opt.max_iter, ratio_opt.restarts};
      const RatioReport report = ratio_check(sample, space, mopt);
      emit(make_envelope("ratio", common_echo(ratio_opt), to_json(report),
                         {{"total", elapsed_ms()}}),
           ratio_opt.out_path, ratio_opt.pretty, out);
      return 0;
    }

    if (sim_cmd->parsed()) {
      sim_cfg.mean_types.clear();
      std::stringstream ss(sim_methods);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item == "intrinsic-intrinsic") {
          sim_cfg.mean_types.push_back(ClassifierMethod::IntrinsicIntrinsic);
        } else if (item == "intrinsic-residual") {
          sim_cfg.mean_types.push_back(ClassifierMethod::IntrinsicResidual);
        } else if (item == "ziezold") {
          sim_cfg.mean_types.push_back(ClassifierMethod::ZiezoldResidual);
        } else if (item == "schoenberg") {
          sim_cfg.mean_types.push_back(ClassifierMethod::SchoenbergResidual);
        } else {
          throw Error("unknown classification method: " + item);
        }
      }
      const ExperimentReport report = classification_study(sim_cfg);
      if (!sim_replicate_csv.empty()) {
        std::ofstream csv(sim_replicate_csv);
        if (!csv) {
          throw Error("cannot open replicate CSV file: " + sim_replicate_csv);
        }
        write_replicate_csv(report, csv);
      }
      nlohmann::json echo;
      echo["epsilon"] = sim_cfg.epsilon;
      echo["sigma2"] = sim_cfg.sigma2;
      echo["n_per_group"] = sim_cfg.n_per_group;
      echo["replicates"] = sim_cfg.replicates;
      echo["level"] = sim_cfg.level;
      echo["seed"] = sim_cfg.seed;
      echo["max_components"] = sim_cfg.max_components;
      echo["mean_types"] = sim_methods;
      echo["replicate_csv"] = sim_replicate_csv;
      std::map<std::string, double> timings{{"total", elapsed_ms()}};
      for (const auto& m : report.methods) {
        timings[classifier_method_name(m.method)] = m.runtime_ms;
      }
      emit(make_envelope("sim-classify", echo, to_json(report), timings), sim_out,
           sim_pretty, out);
      return 0;
    }

    if (demo_cmd->parsed()) {
      nlohmann::json payload;
      nlohmann::json echo;
      echo["which"] = demo_which;
      if (demo_which == "counterexample") {
        payload = to_json(procrustes_counterexample());
      } else if (demo_which == "blindness") {
        payload = to_json(blindness_demo(demo_phi, demo_beta));
        echo["phi"] = demo_phi;
        echo["beta"] = demo_beta;
      } else if (demo_which == "circle-means") {
        payload = to_json(circle_means_demo(demo_gamma));
        echo["gamma"] = demo_gamma;
      } else if (demo_which == "rank-law") {
        std::vector<int> n_values;
        std::stringstream ss(demo_n_values);
        std::string item;
        while (std::getline(ss, item, ',')) {
          n_values.push_back(std::stoi(item));
        }
        payload = to_json(rank_law_check(demo_m, demo_k, n_values, demo_seed, demo_repeats));
        echo["m"] = demo_m;
        echo["k"] = demo_k;
        echo["n_values"] = demo_n_values;
        echo["seed"] = demo_seed;
        echo["repeats"] = demo_repeats;
      } else {
        throw Error("unknown demo: " + demo_which);
      }
      emit(make_envelope("demo", echo, payload, {{"total", elapsed_ms()}}), demo_out,
           demo_pretty, out);
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "no subcommand given\n";
  return 2;
}

}  // namespace shapestat
