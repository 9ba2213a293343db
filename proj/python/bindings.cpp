#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "shapestat/circle.hpp"
#include "shapestat/experiments.hpp"
#include "shapestat/report.hpp"
#include "shapestat/tangent.hpp"

namespace py = pybind11;
using namespace shapestat;

namespace {

Group parse_group(const std::string& name) {
  if (name == "rotations" || name == "kendall") {
    return Group::Rotations;
  }
  if (name == "reflections" || name == "reflection" || name == "rotations_and_reflections") {
    return Group::RotationsAndReflections;
  }
  throw Error("unknown group: " + name);
}

ShapeSpace space_of(const Eigen::MatrixXd& preshape, const std::string& group) {
  return ShapeSpace(static_cast<int>(preshape.rows()), static_cast<int>(preshape.cols()) + 1,
                    parse_group(group));
}

Sample make_sample(const std::vector<Eigen::MatrixXd>& points,
                   const std::optional<std::vector<double>>& weights) {
  std::vector<PreShape> ps;
  ps.reserve(points.size());
  for (const auto& p : points) {
    ps.emplace_back(p);
  }
  if (weights) {
    return Sample(std::move(ps), *weights);
  }
  return Sample(std::move(ps));
}

py::dict estimate_to_dict(const MeanEstimate& est) {
  py::dict d;
  d["representative"] = est.representative.entries();
  d["mean_type"] = mean_type_name(est.mean_type);
  d["iterations"] = est.iterations;
  d["final_update_norm"] = est.final_update_norm;
  d["objective"] = est.objective;
  d["rank"] = est.rank;
  d["regularity"] = regularity_name(est.regularity);
  d["converged"] = est.converged;
  d["non_unique"] = est.non_unique;
  if (est.pre_projection_rank >= 0) {
    d["pre_projection_rank"] = est.pre_projection_rank;
  }
  return d;
}

py::dict report_to_dict(const TestReport& r) {
  py::dict d;
  d["statistic"] = r.statistic;
  d["f_statistic"] = r.f_statistic;
  d["dof"] = py::make_tuple(r.dof.first, r.dof.second);
  d["p_value"] = r.p_value;
  d["reject"] = r.reject;
  d["level"] = r.level;
  return d;
}

}  // namespace

PYBIND11_MODULE(_shapestat, m) {
  m.doc() = "Statistics on Kendall's shape spaces: pre-shapes, Procrustes "
            "alignment, intrinsic/Ziezold/Procrustes/Schoenberg means, tangent "
            "coordinates and two-sample tests.";
  m.attr("__version__") = kToolVersion;

  py::register_exception<Error>(m, "ShapestatError");

  m.def("helmert_submatrix", &helmert_submatrix, py::arg("k"));
  m.def(
      "helmertize",
      [](const Eigen::MatrixXd& config) { return helmertize(Configuration(config)); },
      py::arg("configuration"));
  m.def(
      "to_preshape",
      [](const Eigen::MatrixXd& config) {
        return to_preshape(Configuration(config)).entries();
      },
      py::arg("configuration"));
  m.def(
      "embed",
      [](const Eigen::MatrixXd& x, int target_m) {
        return embed(PreShape(x), target_m).entries();
      },
      py::arg("preshape"), py::arg("target_m"));
  m.def(
      "rank_of",
      [](const Eigen::MatrixXd& x, double tol) { return rank_of(PreShape(x), tol); },
      py::arg("preshape"), py::arg("tol") = 1e-9);
  m.def(
      "regularity",
      [](const Eigen::MatrixXd& x, const std::string& group) {
        const PreShape p(x);
        return regularity_name(regularity(p, space_of(x, group)));
      },
      py::arg("preshape"), py::arg("group") = "rotations");

  m.def(
      "optimal_position",
      [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& p, const std::string& group) {
        const Alignment al = optimal_position(PreShape(x), PreShape(p), parse_group(group));
        return py::make_tuple(al.rotation, al.inner_product);
      },
      py::arg("x"), py::arg("p"), py::arg("group") = "rotations");
  m.def(
      "intrinsic_distance",
      [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const std::string& group) {
        return intrinsic_distance(PreShape(x), PreShape(y), space_of(x, group));
      },
      py::arg("x"), py::arg("y"), py::arg("group") = "rotations");
  m.def(
      "ziezold_distance",
      [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const std::string& group) {
        return ziezold_distance(PreShape(x), PreShape(y), space_of(x, group));
      },
      py::arg("x"), py::arg("y"), py::arg("group") = "rotations");
  m.def(
      "procrustes_distance",
      [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const std::string& group) {
        return procrustes_distance(PreShape(x), PreShape(y), space_of(x, group));
      },
      py::arg("x"), py::arg("y"), py::arg("group") = "rotations");
  m.def(
      "sphere_log",
      [](const Eigen::MatrixXd& p, const Eigen::MatrixXd& x) {
        return sphere_log(PreShape(p), PreShape(x)).entries();
      },
      py::arg("p"), py::arg("x"));
  m.def(
      "sphere_exp",
      [](const Eigen::MatrixXd& p, const Eigen::MatrixXd& v) {
        const PreShape base(p);
        return sphere_exp(base, TangentVector(v, base)).entries();
      },
      py::arg("p"), py::arg("v"));
  m.def(
      "geodesic_point",
      [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double t,
         const std::string& group) {
        return geodesic_point(PreShape(x), PreShape(y), t, space_of(x, group)).entries();
      },
      py::arg("x"), py::arg("y"), py::arg("t"), py::arg("group") = "rotations");

  m.def(
      "intrinsic_mean",
      [](const std::vector<Eigen::MatrixXd>& points,
         const std::optional<std::vector<double>>& weights, const std::string& group,
         double tol, int max_iter, int restarts) {
        const Sample sample = make_sample(points, weights);
        const ShapeSpace space = space_of(points.front(), group);
        return estimate_to_dict(intrinsic_mean(sample, space, {tol, max_iter, restarts}));
      },
      py::arg("points"), py::arg("weights") = std::nullopt, py::arg("group") = "rotations",
      py::arg("tol") = 1e-10, py::arg("max_iter") = 1000, py::arg("restarts") = 1);
  m.def(
      "ziezold_mean",
      [](const std::vector<Eigen::MatrixXd>& points,
         const std::optional<std::vector<double>>& weights, const std::string& group,
         double tol, int max_iter, int restarts) {
        const Sample sample = make_sample(points, weights);
        const ShapeSpace space = space_of(points.front(), group);
        return estimate_to_dict(ziezold_mean(sample, space, {tol, max_iter, restarts}));
      },
      py::arg("points"), py::arg("weights") = std::nullopt, py::arg("group") = "rotations",
      py::arg("tol") = 1e-10, py::arg("max_iter") = 1000, py::arg("restarts") = 1);
  m.def(
      "full_procrustes_mean",
      [](const std::vector<Eigen::MatrixXd>& points,
         const std::optional<std::vector<double>>& weights, const std::string& group,
         double tol, int max_iter) {
        const Sample sample = make_sample(points, weights);
        const ShapeSpace space = space_of(points.front(), group);
        return estimate_to_dict(full_procrustes_mean(sample, space, {tol, max_iter, 1}));
      },
      py::arg("points"), py::arg("weights") = std::nullopt, py::arg("group") = "rotations",
      py::arg("tol") = 1e-10, py::arg("max_iter") = 1000);
  m.def(
      "schoenberg_mean",
      [](const std::vector<Eigen::MatrixXd>& points,
         const std::optional<std::vector<double>>& weights, int rank,
         const std::string& projection) {
        const Sample sample = make_sample(points, weights);
        const ShapeSpace space = space_of(points.front(), "reflections");
        const int r = rank > 0 ? rank : space.m;
        return estimate_to_dict(schoenberg_mean(
            sample, space, r,
            projection == "central" ? SchoenbergProjectionKind::Central
                                    : SchoenbergProjectionKind::Orthogonal));
      },
      py::arg("points"), py::arg("weights") = std::nullopt, py::arg("rank") = 0,
      py::arg("projection") = "orthogonal");

  m.def(
      "spherical_extrinsic_mean",
      [](const std::vector<Eigen::MatrixXd>& points,
         const std::optional<std::vector<double>>& weights) {
        return spherical_extrinsic_mean(make_sample(points, weights)).entries();
      },
      py::arg("points"), py::arg("weights") = std::nullopt);
  m.def(
      "spherical_residual_mean",
      [](const std::vector<Eigen::MatrixXd>& points,
         const std::optional<std::vector<double>>& weights) {
        const ResidualMeanPair pair = spherical_residual_mean(make_sample(points, weights));
        py::dict d;
        d["positive"] = pair.positive.entries();
        d["negative"] = pair.negative.entries();
        d["eigen_gap"] = pair.eigen_gap;
        d["non_unique"] = pair.non_unique;
        return d;
      },
      py::arg("points"), py::arg("weights") = std::nullopt);
  m.def(
      "spherical_intrinsic_mean",
      [](const std::vector<Eigen::MatrixXd>& points,
         const std::optional<std::vector<double>>& weights, double tol, int max_iter) {
        return estimate_to_dict(
            spherical_intrinsic_mean(make_sample(points, weights), {tol, max_iter, 1}));
      },
      py::arg("points"), py::arg("weights") = std::nullopt, py::arg("tol") = 1e-10,
      py::arg("max_iter") = 1000);

  m.def(
      "schoenberg_embed",
      [](const Eigen::MatrixXd& x) { return schoenberg_embed(PreShape(x)).gram(); },
      py::arg("preshape"));
  m.def(
      "schoenberg_derivative",
      [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& w) {
        const PreShape base(x);
        return schoenberg_derivative(base, TangentVector(w, base));
      },
      py::arg("preshape"), py::arg("tangent"));
  m.def(
      "project_orthogonal",
      [](const Eigen::MatrixXd& gram, int r) {
        const SchoenbergProjection proj = project_orthogonal(SchoenbergPoint(gram), r);
        return py::make_tuple(proj.point.gram(), proj.non_unique);
      },
      py::arg("gram"), py::arg("r"));
  m.def(
      "project_central",
      [](const Eigen::MatrixXd& gram, int r) {
        const SchoenbergProjection proj = project_central(SchoenbergPoint(gram), r);
        return py::make_tuple(proj.point.gram(), proj.non_unique);
      },
      py::arg("gram"), py::arg("r"));
  m.def(
      "schoenberg_inverse",
      [](const Eigen::MatrixXd& gram, int r, int m_target) {
        return schoenberg_inverse(SchoenbergPoint(gram), r, m_target).entries();
      },
      py::arg("gram"), py::arg("r"), py::arg("m"));

  m.def(
      "tangent_coordinates",
      [](const std::vector<Eigen::MatrixXd>& points, const Eigen::MatrixXd& base,
         const std::string& kind, const std::string& group) {
        const Sample sample = make_sample(points, std::nullopt);
        const TangentKind tk =
            kind == "intrinsic" ? TangentKind::IntrinsicCoords : TangentKind::ResidualCoords;
        return tangent_coordinates(sample, PreShape(base), tk, space_of(base, group))
            .coordinates;
      },
      py::arg("points"), py::arg("base"), py::arg("kind") = "residual",
      py::arg("group") = "rotations");
  m.def(
      "hotelling_two_sample",
      [](const Eigen::MatrixXd& coords_a, const Eigen::MatrixXd& coords_b, double level,
         int max_components) {
        return report_to_dict(
            detail::hotelling_from_coordinates(coords_a, coords_b, level, max_components));
      },
      py::arg("coords_a"), py::arg("coords_b"), py::arg("level") = 0.05,
      py::arg("max_components") = -1);

  m.def("cube_pyramid_config",
        [](double epsilon) { return cube_pyramid_config(epsilon).entries(); },
        py::arg("epsilon"));
  m.def("tetrahedron_preshape", [] { return tetrahedron_preshape().entries(); });
  m.def(
      "ratio_check",
      [](const std::vector<Eigen::MatrixXd>& points,
         const std::optional<std::vector<double>>& weights, const std::string& group) {
        const Sample sample = make_sample(points, weights);
        const RatioReport r = ratio_check(sample, space_of(points.front(), group));
        py::dict d;
        d["d_iz"] = r.d_iz;
        d["d_pz"] = r.d_pz;
        d["d_pi"] = r.d_pi;
        d["concentration"] = r.concentration;
        d["ratio"] = r.ratio;
        d["cross_distance"] = r.cross_distance;
        return d;
      },
      py::arg("points"), py::arg("weights") = std::nullopt, py::arg("group") = "rotations");
  m.def("procrustes_counterexample", [] {
    const CounterexampleResult r = procrustes_counterexample();
    py::dict d;
    d["full_procrustes"] = estimate_to_dict(r.full_procrustes);
    d["intrinsic"] = estimate_to_dict(r.intrinsic);
    d["ziezold"] = estimate_to_dict(r.ziezold);
    d["procrustes_distance_to_p1"] = r.procrustes_distance_to_p1;
    return d;
  });
  m.def(
      "blindness_demo",
      [](double phi, double beta) {
        const BlindnessResult r = blindness_demo(phi, beta);
        py::dict d;
        d["intrinsic_movement"] = r.intrinsic_movement;
        d["schoenberg_movement"] = r.schoenberg_movement;
        d["movement_ratio"] = r.movement_ratio;
        return d;
      },
      py::arg("phi") = 0.05, py::arg("beta") = 0.3);
  m.def(
      "circle_means",
      [](double gamma) {
        const CircleMeansResult r = circle_means_demo(gamma);
        py::dict d;
        d["intrinsic_angle"] = r.intrinsic_angle;
        d["extrinsic_angle"] = r.extrinsic_angle;
        d["residual_angle"] = r.residual_angle;
        d["intrinsic_closed_form"] = r.intrinsic_closed_form;
        d["extrinsic_closed_form"] = r.extrinsic_closed_form;
        d["residual_closed_form"] = r.residual_closed_form;
        return d;
      },
      py::arg("gamma"));
  m.def(
      "rank_law_check",
      [](int m_dim, int k, const std::vector<int>& n_values, std::uint64_t seed, int repeats) {
        const RankLawReport r = rank_law_check(m_dim, k, n_values, seed, repeats);
        py::list entries;
        for (const auto& e : r.entries) {
          py::dict d;
          d["n"] = e.n;
          d["expected_rank"] = e.expected_rank;
          d["observed_ranks"] = e.observed_ranks;
          d["all_match"] = e.all_match;
          entries.append(d);
        }
        py::dict d;
        d["entries"] = entries;
        d["all_match"] = r.all_match;
        return d;
      },
      py::arg("m"), py::arg("k"), py::arg("n_values"), py::arg("seed") = 0,
      py::arg("repeats") = 1);
  m.def(
      "classification_study",
      [](double epsilon, double sigma2, int n_per_group, int replicates, double level,
         std::uint64_t seed, int max_components) {
        SimulationConfig cfg;
        cfg.epsilon = epsilon;
        cfg.sigma2 = sigma2;
        cfg.n_per_group = n_per_group;
        cfg.replicates = replicates;
        cfg.level = level;
        cfg.seed = seed;
        cfg.max_components = max_components;
        const ExperimentReport r = classification_study(cfg);
        py::list methods;
        for (const auto& mo : r.methods) {
          py::dict d;
          d["method"] = classifier_method_name(mo.method);
          d["rejections"] = mo.rejections;
          d["failures"] = mo.failures;
          d["rejection_percent"] = mo.rejection_percent;
          d["std_error_percent"] = mo.std_error_percent;
          methods.append(d);
        }
        py::dict d;
        d["methods"] = methods;
        d["replicates"] = r.replicates_run;
        return d;
      },
      py::arg("epsilon") = 0.0, py::arg("sigma2") = 0.2, py::arg("n_per_group") = 10,
      py::arg("replicates") = 100, py::arg("level") = 0.05, py::arg("seed") = 0,
      py::arg("max_components") = -1);
}
