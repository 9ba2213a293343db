#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "shapestat/experiments.hpp"

using namespace shapestat;

TEST_CASE("cube/pyramid configuration matrix") {
  const Configuration flat = cube_pyramid_config(0.0);
  CHECK(rank_of(to_preshape(flat)) == 2);

  const Configuration cube = cube_pyramid_config(1.0);
  REQUIRE(cube.m() == 3);
  REQUIRE(cube.k() == 8);
  // epsilon = 1 gives the unit cube vertices.
  for (int j = 0; j < 8; ++j) {
    for (int i = 0; i < 3; ++i) {
      const double v = cube.entries()(i, j);
      CHECK((v == doctest::Approx(0.0) || v == doctest::Approx(1.0)));
    }
  }
  CHECK(rank_of(to_preshape(cube)) == 3);

  const Configuration pyramid = cube_pyramid_config(0.2);
  CHECK(pyramid.entries()(0, 2) == doctest::Approx(0.6));
  CHECK(pyramid.entries()(1, 2) == doctest::Approx(0.4));
  CHECK(pyramid.entries()(2, 2) == doctest::Approx(0.2));
}

TEST_CASE("perturb adds noise of the configured variance and is seed-deterministic") {
  const Configuration base = cube_pyramid_config(1.0);

  Rng rng_a(5), rng_b(5);
  const Configuration a = perturb(base, 0.2, rng_a);
  const Configuration b = perturb(base, 0.2, rng_b);
  CHECK((a.entries() - b.entries()).cwiseAbs().maxCoeff() == 0.0);

  // Sample variance of one entry over many draws.
  Rng rng(17);
  const int n = 100000;
  double sum = 0, sum_sq = 0;
  for (int i = 0; i < n; ++i) {
    const Configuration c = perturb(base, 0.2, rng);
    const double delta = c.entries()(1, 3) - base.entries()(1, 3);
    sum += delta;
    sum_sq += delta * delta;
  }
  const double variance = sum_sq / n - (sum / n) * (sum / n);
  CHECK(variance == doctest::Approx(0.2).epsilon(0.02));

  // Vanishing-variance limit returns the input.
  Rng rng_tiny(1);
  const Configuration near_zero = perturb(base, 1e-30, rng_tiny);
  CHECK((near_zero.entries() - base.entries()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(perturb(base, 0.0, rng_tiny), InvalidDimension);
}

TEST_CASE("ratio check on a concentrated tetrahedron sample") {
  Rng rng(2024);
  const Sample sample = concentrated_sample(tetrahedron_preshape(), 0.1, 100, rng);
  const ShapeSpace space(3, 4, Group::Rotations);
  const RatioReport report = ratio_check(sample, space);

  CHECK(report.ratio > 0.20);
  CHECK(report.ratio < 0.30);
  CHECK(report.d_iz + report.d_pz == doctest::Approx(report.d_pi).epsilon(0.05));
  CHECK(report.cross_distance < 0.3 * report.d_pi);
  CHECK(report.concentration > 0.0);
}

TEST_CASE("ratio check rejects coinciding means") {
  // Two symmetric points: all three means sit at the midpoint.
  const auto pair = testhelpers::sharpness_pair(0.8);
  const Sample sample({pair.x, pair.y});
  const ShapeSpace space(2, 4, Group::Rotations);
  CHECK_THROWS_AS(ratio_check(sample, space), MeansCoincide);
}

TEST_CASE("procrustes counterexample: full Procrustes mean degenerates") {
  const CounterexampleResult res = procrustes_counterexample();

  CHECK(res.full_procrustes.rank == 1);
  CHECK(res.full_procrustes.regularity == Regularity::Singular);
  CHECK(res.procrustes_distance_to_p1 < 1e-6);

  CHECK(res.intrinsic.regularity == Regularity::Regular);
  CHECK(res.intrinsic.rank == 2);
  CHECK(res.ziezold.regularity == Regularity::Regular);
  CHECK(res.ziezold.rank == 2);

  // Closed forms along the geodesic from p1 to p2: the intrinsic mean sits at
  // arc distance pi/6, the Ziezold mean at arctan(1/2).
  CHECK(res.intrinsic_distance_to_p1 == doctest::Approx(M_PI / 6).epsilon(1e-8));
  CHECK(res.ziezold_distance_to_p1 == doctest::Approx(std::atan(0.5)).epsilon(1e-8));
}

TEST_CASE("blindness demo: Schoenberg mean barely moves at small phi") {
  const BlindnessResult res = blindness_demo(0.05, 0.3);
  CHECK(res.movement_ratio > 5.0);
  CHECK(res.intrinsic_movement > res.schoenberg_movement);
}

TEST_CASE("blindness demo: movements are comparable at phi = pi/4") {
  const BlindnessResult res = blindness_demo(M_PI / 4, 0.3);
  CHECK(res.movement_ratio > 0.5);
  CHECK(res.movement_ratio < 2.0);
}

TEST_CASE("blindness demo is consistent for the two-point sample") {
  // Dropping q reduces both estimators to their two-point versions; the demo
  // recomputes them, so the pair means of two calls must agree.
  const BlindnessResult a = blindness_demo(0.05, 0.3);
  const BlindnessResult b = blindness_demo(0.05, 0.3);
  CHECK((a.intrinsic_pair.representative.entries() -
         b.intrinsic_pair.representative.entries())
            .norm() == 0.0);
  CHECK((a.schoenberg_pair.representative.entries() -
         b.schoenberg_pair.representative.entries())
            .norm() == 0.0);
}

TEST_CASE("rank law: averaged Gram matrices saturate at min(nm, k-1)") {
  const RankLawReport report = rank_law_check(3, 8, {1, 2, 3, 100}, 99, 3);
  REQUIRE(report.entries.size() == 4);
  CHECK(report.entries[0].expected_rank == 3);
  CHECK(report.entries[1].expected_rank == 6);
  CHECK(report.entries[2].expected_rank == 7);
  CHECK(report.entries[3].expected_rank == 7);
  CHECK(report.all_match);
}

TEST_CASE("classification study is reproducible and fails gracefully") {
  SimulationConfig cfg;
  cfg.epsilon = 0.0;
  cfg.sigma2 = 0.2;
  cfg.replicates = 12;
  cfg.seed = 4242;

  const ExperimentReport a = classification_study(cfg);
  const ExperimentReport b = classification_study(cfg);
  REQUIRE(a.methods.size() == 4);
  for (std::size_t i = 0; i < a.methods.size(); ++i) {
    CHECK(a.methods[i].rejections == b.methods[i].rejections);
    CHECK(a.methods[i].failures == 0);
  }
}

TEST_CASE("per-replicate outcomes aggregate to the reported counts") {
  SimulationConfig cfg;
  cfg.epsilon = 0.3;
  cfg.replicates = 10;
  cfg.seed = 12;
  const ExperimentReport report = classification_study(cfg);
  REQUIRE(report.replicate_outcomes.size() == report.methods.size());
  for (std::size_t mi = 0; mi < report.methods.size(); ++mi) {
    REQUIRE(static_cast<int>(report.replicate_outcomes[mi].size()) == cfg.replicates);
    int rejections = 0, failures = 0;
    for (int code : report.replicate_outcomes[mi]) {
      rejections += code == 1;
      failures += code == 2;
    }
    CHECK(rejections == report.methods[mi].rejections);
    CHECK(failures == report.methods[mi].failures);
  }

  std::ostringstream csv;
  write_replicate_csv(report, csv);
  const std::string text = csv.str();
  CHECK(text.rfind("replicate,method,outcome\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') ==
        1 + cfg.replicates * static_cast<int>(report.methods.size()));
}

TEST_CASE("vanishing noise separates the groups perfectly") {
  SimulationConfig cfg;
  cfg.epsilon = 0.0;
  cfg.sigma2 = 1e-4;
  cfg.replicates = 10;
  cfg.seed = 99;
  const ExperimentReport report = classification_study(cfg);
  for (const auto& m : report.methods) {
    CHECK(m.rejection_percent == 100.0);
  }
}

TEST_CASE("classification study is reproducible across worker counts") {
  SimulationConfig cfg;
  cfg.epsilon = 0.3;
  cfg.replicates = 8;
  cfg.seed = 5;

  setenv("SHAPESTAT_THREADS", "1", 1);
  const ExperimentReport serial = classification_study(cfg);
  setenv("SHAPESTAT_THREADS", "4", 1);
  const ExperimentReport parallel = classification_study(cfg);
  unsetenv("SHAPESTAT_THREADS");
  for (std::size_t i = 0; i < serial.methods.size(); ++i) {
    CHECK(serial.methods[i].rejections == parallel.methods[i].rejections);
  }
}

TEST_CASE("rejection percentages do not increase with noise") {
  const std::vector<double> sigmas{0.1, 0.2, 0.4};
  std::vector<ExperimentReport> reports;
  for (double s2 : sigmas) {
    SimulationConfig cfg;
    cfg.epsilon = 0.0;
    cfg.sigma2 = s2;
    cfg.replicates = 200;
    cfg.seed = 31337;
    reports.push_back(classification_study(cfg));
  }
  for (std::size_t method = 0; method < reports.front().methods.size(); ++method) {
    for (std::size_t level = 1; level < reports.size(); ++level) {
      const double prev = reports[level - 1].methods[method].rejection_percent;
      const double curr = reports[level].methods[method].rejection_percent;
      CHECK(curr <= prev + 2.0);  // two percentage points of Monte Carlo slack
    }
  }
}
