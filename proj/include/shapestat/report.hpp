#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "shapestat/circle.hpp"
#include "shapestat/experiments.hpp"
#include "shapestat/tangent.hpp"

namespace shapestat {

inline constexpr const char* kToolVersion = "0.1.0";

std::string mean_type_name(MeanType type);
std::string regularity_name(Regularity r);
std::string group_name(Group g);
std::string tangent_kind_name(TangentKind kind);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MeanEstimate& est);
nlohmann::json to_json(const TestReport& report);
nlohmann::json to_json(const RatioReport& report);
nlohmann::json to_json(const TangentSample& sample);
nlohmann::json to_json(const CounterexampleResult& result);
nlohmann::json to_json(const BlindnessResult& result);
nlohmann::json to_json(const CircleMeansResult& result);
nlohmann::json to_json(const RankLawReport& report);

/// Replicate-deterministic part of a classification study; per-method
/// runtimes go into the envelope's timing map instead.
nlohmann::json to_json(const ExperimentReport& report);

/// Wraps a payload with version, command, echoed configuration and timings.
/// The config echo must suffice to reproduce the run.
nlohmann::json make_envelope(const std::string& command, nlohmann::json config_echo,
                             nlohmann::json payload,
                             const std::map<std::string, double>& timings_ms);

}  // namespace shapestat
