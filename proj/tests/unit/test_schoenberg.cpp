#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "shapestat/means.hpp"

using namespace shapestat;
using testhelpers::random_matrix;
using testhelpers::random_orthogonal;
using testhelpers::random_preshape;

namespace {

/// Brute-force oracle for the rank-2 projection: scans the 1-simplex in the
/// eigenbasis of `a` for the nearest (in tr((a-b)^2)) rank-2 point of P.
std::pair<double, double> simplex_grid_projection(const std::vector<double>& lambda,
                                                  double resolution) {
  double best_t = -1, best_value = 1e99;
  for (double t = resolution; t < 1.0; t += resolution) {
    // Candidate eigenvalues (t, 1-t, 0) against lambda.
    const double v = (lambda[0] - t) * (lambda[0] - t) +
                     (lambda[1] - (1.0 - t)) * (lambda[1] - (1.0 - t)) +
                     lambda[2] * lambda[2];
    if (v < best_value) {
      best_value = v;
      best_t = t;
    }
  }
  return {best_t, 1.0 - best_t};
}

SchoenbergPoint diag_point(const std::vector<double>& lambda) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(lambda.size(), lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    g(i, i) = lambda[i];
  }
  return SchoenbergPoint(g);
}

}  // namespace

TEST_CASE("schoenberg embedding basics") {
  Eigen::MatrixXd e1 = Eigen::MatrixXd::Zero(2, 3);
  e1(0, 0) = 1;
  const SchoenbergPoint g = schoenberg_embed(PreShape(e1));
  CHECK(g.gram()(0, 0) == doctest::Approx(1.0));
  CHECK(g.gram().trace() == doctest::Approx(1.0));

  Rng rng(89);
  for (int rep = 0; rep < 10; ++rep) {
    const PreShape x = random_preshape(3, 6, rng);
    const Eigen::MatrixXd q = random_orthogonal(3, rng);
    const PreShape moved(q * x.entries());
    CHECK((schoenberg_embed(x).gram() - schoenberg_embed(moved).gram()).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("schoenberg derivative norms from the non-isometry example") {
  const double phi = 0.3;
  Eigen::MatrixXd xm(2, 2), w1m(2, 2), w2m(2, 2);
  xm << std::cos(phi), 0, 0, std::sin(phi);
  w1m << std::sin(phi), 0, 0, -std::cos(phi);
  w2m << 0, std::cos(phi), std::sin(phi), 0;
  const PreShape x(xm);

  const Eigen::MatrixXd d1 = schoenberg_derivative(x, TangentVector(w1m, x));
  const Eigen::MatrixXd d2 = schoenberg_derivative(x, TangentVector(w2m, x));
  CHECK(d1.norm() ==
        doctest::Approx(std::sqrt(2.0) * 2.0 * std::cos(phi) * std::sin(phi)).epsilon(1e-12));
  CHECK(d2.norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  CHECK(schoenberg_derivative(x, TangentVector(Eigen::MatrixXd::Zero(2, 2), x)).norm() == 0.0);
}

TEST_CASE("schoenberg derivative matches finite differences at order h^2") {
  Rng rng(97);
  const PreShape x = random_preshape(3, 6, rng);
  // A horizontal tangent: project a random tangent vector.
  const TangentVector w = project_horizontal(TangentVector(random_matrix(3, 5, rng), x),
                                             Group::RotationsAndReflections);
  const Eigen::MatrixXd derivative = schoenberg_derivative(x, w);

  auto error_at = [&](double h) {
    const PreShape moved = sphere_exp(x, TangentVector(h * w.entries(), x));
    const Eigen::MatrixXd fd =
        moved.entries().transpose() * moved.entries() - schoenberg_embed(x).gram();
    return (fd - h * derivative).norm();
  };
  // Halving h divides the error by about 4.
  const double e1 = error_at(1e-3);
  const double e2 = error_at(5e-4);
  const double slope = std::log(e1 / e2) / std::log(2.0);
  CHECK(slope > 1.9);
  CHECK(slope < 2.1);
}

TEST_CASE("orthogonal projection formula on (0.5, 0.3, 0.2), r = 2") {
  const SchoenbergProjection proj = project_orthogonal(diag_point({0.5, 0.3, 0.2}), 2);
  CHECK(proj.point.gram()(0, 0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(proj.point.gram()(1, 1) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(proj.point.gram()(2, 2) == doctest::Approx(0.0));
  CHECK_FALSE(proj.non_unique);

  // Brute-force against the simplex grid.
  const auto [t0, t1] = simplex_grid_projection({0.5, 0.3, 0.2}, 1e-5);
  CHECK(std::abs(t0 - 0.6) < 1e-3);
  CHECK(std::abs(t1 - 0.4) < 1e-3);
}

TEST_CASE("orthogonal projection to rank 1 keeps only the top direction") {
  const SchoenbergProjection proj = project_orthogonal(diag_point({0.4, 0.35, 0.25}), 1);
  CHECK(proj.point.gram()(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(proj.point.gram()(1, 1) == doctest::Approx(0.0));
  CHECK(proj.point.gram()(2, 2) == doctest::Approx(0.0));

  // Brute force at rank 1: the candidates are the simplex vertices.
  const std::vector<double> lambda{0.4, 0.35, 0.25};
  int best_vertex = -1;
  double best_value = 1e99;
  for (int v = 0; v < 3; ++v) {
    double value = 0;
    for (int i = 0; i < 3; ++i) {
      const double target = i == v ? 1.0 : 0.0;
      value += (lambda[i] - target) * (lambda[i] - target);
    }
    if (value < best_value) {
      best_value = value;
      best_vertex = v;
    }
  }
  CHECK(best_vertex == 0);
}

TEST_CASE("central projection rescales the leading block") {
  const SchoenbergProjection proj = project_central(diag_point({0.5, 0.3, 0.2}), 2);
  CHECK(proj.point.gram()(0, 0) == doctest::Approx(0.625).epsilon(1e-12));
  CHECK(proj.point.gram()(1, 1) == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(proj.point.gram()(2, 2) == doctest::Approx(0.0));
  // The two projections disagree here.
  CHECK(std::abs(proj.point.gram()(0, 0) -
                 project_orthogonal(diag_point({0.5, 0.3, 0.2}), 2).point.gram()(0, 0)) >
        0.01);
}

TEST_CASE("rank-r inputs are fixed points of both projections") {
  Rng rng(101);
  const PreShape x = random_preshape(2, 6, rng);  // rank 2 Gram in a 5x5 frame
  const SchoenbergPoint a = schoenberg_embed(x);
  for (const SchoenbergProjection& proj : {project_orthogonal(a, 2), project_central(a, 2)}) {
    CHECK((proj.point.gram() - a.gram()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("projection error cases") {
  // lambda_r = 0: not in the domain of either projection.
  CHECK_THROWS_AS(project_orthogonal(diag_point({1.0, 0.0, 0.0}), 2), NotInDomain);
  CHECK_THROWS_AS(project_central(diag_point({1.0, 0.0, 0.0}), 2), NotInDomain);

  // Outside P (trace > 1) the orthogonal formula can leave the stratum; the
  // eigenvalue-level helper exposes that case.
  CHECK_THROWS_AS(detail::orthogonal_projection_eigenvalues({2.0, 0.5}, 2), NotInDomain);
  CHECK(detail::central_projection_eigenvalues({2.0, 0.5}, 2)[0] ==
        doctest::Approx(0.8).epsilon(1e-12));

  // Eigenvalue ties flag non-uniqueness.
  const SchoenbergProjection tie = project_orthogonal(diag_point({0.4, 0.3, 0.3}), 2);
  CHECK(tie.non_unique);
}

TEST_CASE("schoenberg inverse round trip") {
  Rng rng(103);
  for (int rep = 0; rep < 10; ++rep) {
    const PreShape x = random_preshape(3, 6, rng);
    const SchoenbergPoint a = schoenberg_embed(x);
    const PreShape back = schoenberg_inverse(a, 3, 3);
    const ShapeSpace reflection(3, 6, Group::RotationsAndReflections);
    CHECK(intrinsic_distance(back, x, reflection) < 1e-7);
    CHECK((schoenberg_embed(back).gram() - a.gram()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("rank-1 gram inverts to a collinear pre-shape") {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(3, 3);
  g(1, 1) = 1.0;
  const PreShape p = schoenberg_inverse(SchoenbergPoint(g), 1, 3);
  CHECK(rank_of(p) == 1);
  CHECK(p.entries().bottomRows(2).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(schoenberg_inverse(SchoenbergPoint(g), 2, 3), RankMismatch);
  CHECK_THROWS_AS(schoenberg_inverse(SchoenbergPoint(g), 1, 0), RankMismatch);
}

TEST_CASE("eigenvector sign flips do not change the reflection shape") {
  Rng rng(107);
  const PreShape x = random_preshape(3, 7, rng);
  const SchoenbergPoint a = schoenberg_embed(x);
  const PreShape inv = schoenberg_inverse(a, 3, 3);
  const ShapeSpace reflection(3, 7, Group::RotationsAndReflections);
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::MatrixXd flipped = inv.entries();
    for (int r = 0; r < 3; ++r) {
      if (rng.uniform() < 0.5) {
        flipped.row(r) = -flipped.row(r);
      }
    }
    CHECK(intrinsic_distance(PreShape(flipped), inv, reflection) < 1e-9);
  }
}

TEST_CASE("schoenberg mean of a single full-rank point is the point") {
  Rng rng(109);
  const PreShape x = random_preshape(3, 8, rng);
  const ShapeSpace reflection(3, 8, Group::RotationsAndReflections);
  const MeanEstimate est =
      schoenberg_mean(Sample({x}), reflection, 3, SchoenbergProjectionKind::Orthogonal);
  CHECK(testhelpers::shape_gap(est.representative, x, reflection.group) < 1e-9);
  CHECK(est.pre_projection_rank == 3);
}

TEST_CASE("schoenberg mean requires the reflection group") {
  Rng rng(113);
  const PreShape x = random_preshape(3, 8, rng);
  CHECK_THROWS_AS(schoenberg_mean(Sample({x}), ShapeSpace(3, 8, Group::Rotations), 3,
                                  SchoenbergProjectionKind::Orthogonal),
                  Error);
}
