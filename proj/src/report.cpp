#include "shapestat/report.hpp"

namespace shapestat {

std::string mean_type_name(MeanType type) {
  switch (type) {
    case MeanType::Intrinsic:
      return "intrinsic";
    case MeanType::Ziezold:
      return "ziezold";
    case MeanType::FullProcrustes:
      return "full_procrustes";
    case MeanType::Residual:
      return "residual";
    case MeanType::Extrinsic:
      return "extrinsic";
    case MeanType::SchoenbergOrthogonal:
      return "schoenberg_orthogonal";
    case MeanType::SchoenbergCentral:
      return "schoenberg_central";
  }
  return "unknown";
}

std::string regularity_name(Regularity r) {
  return r == Regularity::Regular ? "regular" : "singular";
}

std::string group_name(Group g) {
  return g == Group::Rotations ? "rotations" : "rotations_and_reflections";
}

std::string tangent_kind_name(TangentKind kind) {
  return kind == TangentKind::IntrinsicCoords ? "intrinsic" : "residual";
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(m(r, c));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(r, c) = rows[r][c];
    }
  }
  return m;
}

nlohmann::json to_json(const MeanEstimate& est) {
  nlohmann::json j;
  j["mean_type"] = mean_type_name(est.mean_type);
  j["representative"] = matrix_to_json(est.representative.entries());
  j["m"] = est.representative.m();
  j["k"] = est.representative.k();
  j["iterations"] = est.iterations;
  j["final_update_norm"] = est.final_update_norm;
  j["objective"] = est.objective;
  j["rank"] = est.rank;
  j["regularity"] = regularity_name(est.regularity);
  j["converged"] = est.converged;
  j["non_unique"] = est.non_unique;
  if (est.pre_projection_rank >= 0) {
    j["pre_projection_rank"] = est.pre_projection_rank;
  }
  return j;
}

nlohmann::json to_json(const TestReport& report) {
  nlohmann::json j;
  j["statistic"] = report.statistic;
  j["f_statistic"] = report.f_statistic;
  j["dof"] = {report.dof.first, report.dof.second};
  j["p_value"] = report.p_value;
  j["reject"] = report.reject;
  j["level"] = report.level;
  return j;
}

nlohmann::json to_json(const RatioReport& report) {
  nlohmann::json j;
  j["d_iz"] = report.d_iz;
  j["d_pz"] = report.d_pz;
  j["d_pi"] = report.d_pi;
  j["concentration"] = report.concentration;
  j["ratio"] = report.ratio;
  j["cross_distance"] = report.cross_distance;
  return j;
}

nlohmann::json to_json(const TangentSample& sample) {
  nlohmann::json j;
  j["kind"] = tangent_kind_name(sample.kind);
  j["base"] = matrix_to_json(sample.base.entries());
  j["coordinates"] = matrix_to_json(sample.coordinates);
  j["reduced_dimension"] = sample.reduced_dimension;
  return j;
}

nlohmann::json to_json(const CounterexampleResult& result) {
  nlohmann::json j;
  j["full_procrustes"] = to_json(result.full_procrustes);
  j["intrinsic"] = to_json(result.intrinsic);
  j["ziezold"] = to_json(result.ziezold);
  j["procrustes_distance_to_p1"] = result.procrustes_distance_to_p1;
  j["intrinsic_distance_to_p1"] = result.intrinsic_distance_to_p1;
  j["ziezold_distance_to_p1"] = result.ziezold_distance_to_p1;
  return j;
}

nlohmann::json to_json(const BlindnessResult& result) {
  nlohmann::json j;
  j["intrinsic_pair"] = to_json(result.intrinsic_pair);
  j["intrinsic_triple"] = to_json(result.intrinsic_triple);
  j["schoenberg_pair"] = to_json(result.schoenberg_pair);
  j["schoenberg_triple"] = to_json(result.schoenberg_triple);
  j["intrinsic_movement"] = result.intrinsic_movement;
  j["schoenberg_movement"] = result.schoenberg_movement;
  j["movement_ratio"] = result.movement_ratio;
  return j;
}

nlohmann::json to_json(const CircleMeansResult& result) {
  nlohmann::json j;
  j["gamma"] = result.gamma;
  j["intrinsic_angle"] = result.intrinsic_angle;
  j["extrinsic_angle"] = result.extrinsic_angle;
  j["residual_angle"] = result.residual_angle;
  j["intrinsic_closed_form"] = result.intrinsic_closed_form;
  j["extrinsic_closed_form"] = result.extrinsic_closed_form;
  j["residual_closed_form"] = result.residual_closed_form;
  return j;
}

nlohmann::json to_json(const RankLawReport& report) {
  nlohmann::json j;
  j["m"] = report.m;
  j["k"] = report.k;
  j["seed"] = report.seed;
  j["all_match"] = report.all_match;
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : report.entries) {
    nlohmann::json entry;
    entry["n"] = e.n;
    entry["expected_rank"] = e.expected_rank;
    entry["observed_ranks"] = e.observed_ranks;
    entry["all_match"] = e.all_match;
    entries.push_back(std::move(entry));
  }
  j["entries"] = std::move(entries);
  return j;
}

nlohmann::json to_json(const ExperimentReport& report) {
  nlohmann::json j;
  j["epsilon"] = report.config.epsilon;
  j["sigma2"] = report.config.sigma2;
  j["n_per_group"] = report.config.n_per_group;
  j["replicates"] = report.replicates_run;
  j["level"] = report.config.level;
  j["seed"] = report.config.seed;
  j["max_components"] = report.config.max_components;
  nlohmann::json methods = nlohmann::json::array();
  for (const auto& m : report.methods) {
    nlohmann::json entry;
    entry["method"] = classifier_method_name(m.method);
    entry["rejections"] = m.rejections;
    entry["failures"] = m.failures;
    entry["rejection_percent"] = m.rejection_percent;
    entry["std_error_percent"] = m.std_error_percent;
    methods.push_back(std::move(entry));
  }
  j["methods"] = std::move(methods);
  return j;
}

nlohmann::json make_envelope(const std::string& command, nlohmann::json config_echo,
                             nlohmann::json payload,
                             const std::map<std::string, double>& timings_ms) {
  nlohmann::json j;
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  j["config_echo"] = std::move(config_echo);
  j["payload"] = std::move(payload);
  nlohmann::json timings;
  for (const auto& [name, value] : timings_ms) {
    timings[name] = value;
  }
  j["timings_ms"] = std::move(timings);
  return j;
}

}  // namespace shapestat
