#include <doctest.h>

#include <sstream>

#include "shapestat/dataset_io.hpp"
#include "shapestat/report.hpp"

using namespace shapestat;

namespace {

const char* kTriangleJson = R"({
  "m": 2,
  "k": 3,
  "configurations": [[[0, 1, 0], [0, 0, 1]]]
})";

}  // namespace

TEST_CASE("minimal JSON dataset") {
  std::istringstream in(kTriangleJson);
  const DatasetFile d = parse_dataset(in, DatasetFormat::Json);
  CHECK(d.m == 2);
  CHECK(d.k == 3);
  REQUIRE(d.size() == 1);
  CHECK(d.configurations[0](1, 2) == 1.0);
  CHECK(d.weights.empty());

  const Sample sample = dataset_sample(d);
  CHECK(sample.size() == 1);
  CHECK(sample.weights[0] == 1.0);
}

TEST_CASE("dataset weights carry over to the sample") {
  const char* weighted =
      R"({"m":2,"k":3,"configurations":[[[0,1,0],[0,0,1]],[[0,2,0],[0,0,2]]],"weights":[0.25,0.75]})";
  std::istringstream in(weighted);
  const Sample sample = dataset_sample(parse_dataset(in, DatasetFormat::Json));
  REQUIRE(sample.size() == 2);
  CHECK(sample.weights[0] == doctest::Approx(0.25));
  CHECK(sample.weights[1] == doctest::Approx(0.75));
}

TEST_CASE("JSON round trip is value-identical") {
  DatasetFile d;
  d.m = 2;
  d.k = 4;
  d.names = {"first", "second"};
  Eigen::MatrixXd c1(2, 4), c2(2, 4);
  c1 << 0.25, 1, 0, -3.5, 0, 0.125, 1, 2;
  c2 << 1.0 / 3, 1, 0, 0, 0, 1, -1, 0.7;
  d.configurations = {c1, c2};
  d.weights = {0.25, 0.75};

  std::ostringstream out;
  write_dataset(d, out, DatasetFormat::Json);
  std::istringstream in(out.str());
  const DatasetFile back = parse_dataset(in, DatasetFormat::Json);
  CHECK(back.names == d.names);
  CHECK(back.weights == d.weights);
  for (int i = 0; i < 2; ++i) {
    CHECK((back.configurations[i] - d.configurations[i]).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("CSV round trip is value-identical") {
  DatasetFile d;
  d.m = 3;
  d.k = 4;
  Eigen::MatrixXd c1(3, 4);
  c1 << 1, -1, 0, 0, 0.5, 0.25, -0.125, 1.0 / 3, 0, 0, 0, 1;
  d.configurations = {c1, 2.0 * c1};

  std::ostringstream out;
  write_dataset(d, out, DatasetFormat::Csv);
  std::istringstream in(out.str());
  const DatasetFile back = parse_dataset(in, DatasetFormat::Csv);
  REQUIRE(back.size() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK((back.configurations[i] - d.configurations[i]).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("CSV and JSON parse to the same values") {
  const char* csv = "2,3\n0,1,0\n0,0,1\n";
  std::istringstream csv_in(csv);
  const DatasetFile from_csv = parse_dataset(csv_in, DatasetFormat::Csv);
  std::istringstream json_in(kTriangleJson);
  const DatasetFile from_json = parse_dataset(json_in, DatasetFormat::Json);
  CHECK((from_csv.configurations[0] - from_json.configurations[0]).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("malformed datasets are rejected with locations") {
  // Ragged JSON matrix names the offending configuration.
  const char* ragged = R"({"m":2,"k":3,"configurations":[[[0,1,0],[0,0,1]],[[1,2],[3,4,5]]]})";
  std::istringstream in(ragged);
  try {
    parse_dataset(in, DatasetFormat::Json);
    FAIL("expected DimensionMismatch");
  } catch (const DimensionMismatch& e) {
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }

  // Wrong column count in CSV names the line.
  const char* bad_csv = "2,3\n0,1,0\n0,0\n";
  std::istringstream csv_in(bad_csv);
  try {
    parse_dataset(csv_in, DatasetFormat::Csv);
    FAIL("expected DimensionMismatch");
  } catch (const DimensionMismatch& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  // Non-numeric field.
  const char* bad_field = "2,3\n0,1,0\n0,zero,1\n";
  std::istringstream field_in(bad_field);
  CHECK_THROWS_AS(parse_dataset(field_in, DatasetFormat::Csv), ParseError);

  // Missing required JSON fields.
  const char* no_m = R"({"k":3,"configurations":[[[0,1,0],[0,0,1]]]})";
  std::istringstream m_in(no_m);
  CHECK_THROWS_AS(parse_dataset(m_in, DatasetFormat::Json), ParseError);

  // Malformed JSON text.
  std::istringstream junk_in("{not json");
  CHECK_THROWS_AS(parse_dataset(junk_in, DatasetFormat::Json), ParseError);

  // Weight count mismatch.
  const char* short_weights =
      R"({"m":2,"k":3,"configurations":[[[0,1,0],[0,0,1]],[[0,2,0],[0,0,2]]],"weights":[0.5]})";
  std::istringstream w_in(short_weights);
  CHECK_THROWS_AS(parse_dataset(w_in, DatasetFormat::Json), DimensionMismatch);

  // Weights that do not sum to 1.
  const char* bad_sum =
      R"({"m":2,"k":3,"configurations":[[[0,1,0],[0,0,1]]],"weights":[0.5]})";
  std::istringstream s_in(bad_sum);
  CHECK_THROWS_AS(parse_dataset(s_in, DatasetFormat::Json), ParseError);
}

TEST_CASE("format detection from path") {
  CHECK(format_from_path("data/sample.csv") == DatasetFormat::Csv);
  CHECK(format_from_path("data/sample.json") == DatasetFormat::Json);
  CHECK(format_from_path("noextension") == DatasetFormat::Json);
}

TEST_CASE("envelope carries version, echo, payload, timings") {
  nlohmann::json echo;
  echo["tol"] = 1e-10;
  nlohmann::json payload;
  payload["value"] = 42;
  const nlohmann::json env = make_envelope("mean", echo, payload, {{"total", 1.5}});
  CHECK(env["tool_version"] == kToolVersion);
  CHECK(env["command"] == "mean");
  CHECK(env["config_echo"]["tol"] == 1e-10);
  CHECK(env["payload"]["value"] == 42);
  CHECK(env["timings_ms"]["total"] == 1.5);
}

TEST_CASE("serialized numbers round trip losslessly") {
  const double tricky = 0.1 + 0.2;  // not representable exactly
  nlohmann::json j;
  j["v"] = tricky;
  const nlohmann::json back = nlohmann::json::parse(j.dump());
  CHECK(back["v"].get<double>() == tricky);
}
