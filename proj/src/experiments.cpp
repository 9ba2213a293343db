#include "shapestat/experiments.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <ostream>
#include <string>

#include "shapestat/matrix_utils.hpp"
#include "shapestat/parallel.hpp"

namespace shapestat {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

int gram_rank(const Eigen::MatrixXd& gram, double tol = 1e-9) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double top = eig.eigenvalues().cwiseAbs().maxCoeff();
  int rank = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    if (eig.eigenvalues()(i) > tol * top) {
      ++rank;
    }
  }
  return rank;
}

/// Post-hoc stability check: for rotation quotients, an intrinsic or Ziezold
/// mean of a sample of rank at most j can only drop one dimension.
void assert_stability_rank(const MeanEstimate& est, const Sample& sample) {
  int j = 0;
  for (const auto& x : sample.points) {
    j = std::max(j, rank_of(x));
  }
  if (est.rank < j - 1 || est.rank > j) {
    throw Error(std::string("stability violation: ") + "sample of rank " +
                std::to_string(j) + " produced a mean of rank " + std::to_string(est.rank));
  }
}

}  // namespace

const char* classifier_method_name(ClassifierMethod method) {
  switch (method) {
    case ClassifierMethod::IntrinsicIntrinsic:
      return "intrinsic_intrinsic";
    case ClassifierMethod::IntrinsicResidual:
      return "intrinsic_residual";
    case ClassifierMethod::ZiezoldResidual:
      return "ziezold_residual";
    case ClassifierMethod::SchoenbergResidual:
      return "schoenberg_residual";
  }
  return "unknown";
}

Configuration cube_pyramid_config(double epsilon) {
  if (epsilon < 0) {
    throw InvalidDimension("pyramid parameter must be nonnegative");
  }
  const double e = epsilon;
  const double lo = (1.0 - e) / 2.0;
  const double hi = (1.0 + e) / 2.0;
  Eigen::MatrixXd c(3, 8);
  c << 0, 1, hi, lo, 0, 1, hi, lo,  //
      0, 0, lo, lo, 1, 1, hi, hi,   //
      0, 0, e, e, 0, 0, e, e;
  return Configuration(std::move(c));
}

Configuration perturb(const Configuration& c, double sigma2, Rng& rng) {
  if (sigma2 <= 0) {
    throw InvalidDimension("noise variance must be positive");
  }
  const double sigma = std::sqrt(sigma2);
  Eigen::MatrixXd noisy = c.entries();
  for (Eigen::Index i = 0; i < noisy.rows(); ++i) {
    for (Eigen::Index j = 0; j < noisy.cols(); ++j) {
      noisy(i, j) += sigma * rng.normal();
    }
  }
  return Configuration(std::move(noisy));
}

RatioReport ratio_check(const Sample& sample, const ShapeSpace& space,
                        const MeanOptions& opt) {
  const MeanEstimate mu_i = intrinsic_mean(sample, space, opt);
  const MeanEstimate mu_z = ziezold_mean(sample, space, opt);
  const MeanEstimate mu_p = full_procrustes_mean(sample, space, opt);
  assert_stability_rank(mu_i, sample);
  assert_stability_rank(mu_z, sample);

  RatioReport report;
  report.d_iz = intrinsic_distance(mu_i.representative, mu_z.representative, space);
  report.d_pz = intrinsic_distance(mu_p.representative, mu_z.representative, space);
  report.d_pi = intrinsic_distance(mu_p.representative, mu_i.representative, space);
  if (report.d_iz < 10 * opt.tol || report.d_pz < 10 * opt.tol || report.d_pi < 10 * opt.tol) {
    throw MeansCoincide("mean pair closer than 10*tol; ratio undefined");
  }

  Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(sample.points.front().m(), sample.k() - 1);
  for (int i = 0; i < sample.size(); ++i) {
    const Alignment al = optimal_position(sample.points[i], mu_z.representative, space.group);
    avg += sample.weights[i] * (al.rotation * sample.points[i].entries());
  }
  const double conc = 1.0 - avg.norm();
  report.concentration = conc * conc;
  report.ratio = report.d_iz / report.d_pi;

  const PreShape quarter =
      geodesic_point(mu_i.representative, mu_p.representative, 0.25, space);
  report.cross_distance = intrinsic_distance(mu_z.representative, quarter, space);
  return report;
}

CounterexampleResult procrustes_counterexample() {
  Eigen::MatrixXd q1(3, 4);
  q1 << 1, -1, 0, 0,  //
      0, 0, 0, 0,     //
      0, 0, 0, 0;
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd q2(3, 4);
  q2 << 1, 1, -2, 0,     //
      s, s, s, -3.0 * s,  //
      0, 0, 0, 0;

  const PreShape p1 = to_preshape(Configuration(q1));
  const PreShape p2 = to_preshape(Configuration(q2));
  const Sample sample({p1, p2}, {2.0 / 3.0, 1.0 / 3.0});
  const ShapeSpace space(3, 4, Group::Rotations);

  CounterexampleResult res{full_procrustes_mean(sample, space),
                           intrinsic_mean(sample, space), ziezold_mean(sample, space)};
  assert_stability_rank(res.intrinsic, sample);
  assert_stability_rank(res.ziezold, sample);
  res.procrustes_distance_to_p1 =
      intrinsic_distance(res.full_procrustes.representative, p1, space);
  res.intrinsic_distance_to_p1 =
      intrinsic_distance(res.intrinsic.representative, p1, space);
  res.ziezold_distance_to_p1 = intrinsic_distance(res.ziezold.representative, p1, space);
  return res;
}

BlindnessResult blindness_demo(double phi, double beta) {
  if (phi <= 0 || phi >= M_PI / 2 || beta <= 0 || beta >= M_PI / 2) {
    throw InvalidDimension("blindness demo requires phi, beta in (0, pi/2)");
  }
  Eigen::MatrixXd x(2, 2), w1(2, 2), w2(2, 2);
  x << std::cos(phi), 0, 0, std::sin(phi);
  w1 << std::sin(phi), 0, 0, -std::cos(phi);
  w2 << 0, std::cos(phi), std::sin(phi), 0;

  const PreShape q1(std::cos(beta) * x - std::sin(beta) * w2);
  const PreShape q2(std::cos(beta) * x + std::sin(beta) * w2);
  const PreShape q(std::cos(beta) * x + std::sin(beta) * w1);

  const ShapeSpace kendall(2, 3, Group::Rotations);
  const ShapeSpace reflection(2, 3, Group::RotationsAndReflections);
  const Sample pair_sample({q1, q2});
  const Sample triple_sample({q1, q2, q});

  BlindnessResult res{
      intrinsic_mean(pair_sample, kendall), intrinsic_mean(triple_sample, kendall),
      schoenberg_mean(pair_sample, reflection, 2, SchoenbergProjectionKind::Orthogonal),
      schoenberg_mean(triple_sample, reflection, 2, SchoenbergProjectionKind::Orthogonal)};
  res.intrinsic_movement = intrinsic_distance(res.intrinsic_pair.representative,
                                              res.intrinsic_triple.representative, kendall);
  res.schoenberg_movement =
      intrinsic_distance(res.schoenberg_pair.representative,
                         res.schoenberg_triple.representative, reflection);
  res.movement_ratio = res.intrinsic_movement / res.schoenberg_movement;
  return res;
}

namespace {

enum class ReplicateOutcome { Rejected, Accepted, Failed };

struct ReplicateResult {
  std::array<ReplicateOutcome, 4> outcome{ReplicateOutcome::Failed, ReplicateOutcome::Failed,
                                          ReplicateOutcome::Failed, ReplicateOutcome::Failed};
  std::array<double, 4> runtime_ms{0, 0, 0, 0};
};

int method_index(ClassifierMethod m) { return static_cast<int>(m); }

/// One replicate of the discrimination study: noisy cubes vs noisy pyramids,
/// pooled-base tangent coordinates, Hotelling test per configured method.
ReplicateResult run_replicate(const SimulationConfig& cfg, std::uint64_t replicate_index) {
  Rng rng = Rng::for_stream(cfg.seed, replicate_index);
  const Configuration cube = cube_pyramid_config(1.0);
  const Configuration pyramid = cube_pyramid_config(cfg.epsilon);

  std::vector<PreShape> group_a, group_b;
  group_a.reserve(cfg.n_per_group);
  group_b.reserve(cfg.n_per_group);
  try {
    for (int i = 0; i < cfg.n_per_group; ++i) {
      group_a.push_back(to_preshape(perturb(cube, cfg.sigma2, rng)));
    }
    for (int i = 0; i < cfg.n_per_group; ++i) {
      group_b.push_back(to_preshape(perturb(pyramid, cfg.sigma2, rng)));
    }
  } catch (const Error&) {
    return ReplicateResult{};  // degenerate draw: every method fails here
  }
  std::vector<PreShape> pooled = group_a;
  pooled.insert(pooled.end(), group_b.begin(), group_b.end());

  const ShapeSpace kendall(3, 8, Group::Rotations);
  const ShapeSpace reflection(3, 8, Group::RotationsAndReflections);
  const Sample pooled_sample(pooled);
  const Sample sample_a(group_a);
  const Sample sample_b(group_b);

  const int max_components =
      cfg.max_components > 0 ? cfg.max_components : 3 * (2 * cfg.n_per_group) / 5;

  ReplicateResult result;
  for (ClassifierMethod method : cfg.mean_types) {
    const auto start = Clock::now();
    const int idx = method_index(method);
    try {
      const bool schoenberg = method == ClassifierMethod::SchoenbergResidual;
      const ShapeSpace& space = schoenberg ? reflection : kendall;
      MeanEstimate base = [&] {
        switch (method) {
          case ClassifierMethod::SchoenbergResidual:
            return schoenberg_mean(pooled_sample, reflection, 3,
                                   SchoenbergProjectionKind::Orthogonal);
          case ClassifierMethod::ZiezoldResidual:
            return ziezold_mean(pooled_sample, kendall);
          default:
            return intrinsic_mean(pooled_sample, kendall);
        }
      }();
      // Stability check: intrinsic/Ziezold means of absolutely continuous
      // samples must be regular.
      if (!schoenberg && base.regularity != Regularity::Regular) {
        throw Error("pooled intrinsic/Ziezold mean is singular");
      }
      const TangentKind kind = method == ClassifierMethod::IntrinsicIntrinsic
                                   ? TangentKind::IntrinsicCoords
                                   : TangentKind::ResidualCoords;
      const TangentSample ta =
          tangent_coordinates(sample_a, base.representative, kind, space);
      const TangentSample tb =
          tangent_coordinates(sample_b, base.representative, kind, space);
      const TestReport report = hotelling_two_sample(ta, tb, cfg.level, max_components);
      result.outcome[idx] =
          report.reject ? ReplicateOutcome::Rejected : ReplicateOutcome::Accepted;
    } catch (const Error&) {
      result.outcome[idx] = ReplicateOutcome::Failed;
    }
    result.runtime_ms[idx] = ms_since(start);
  }
  return result;
}

}  // namespace

ExperimentReport classification_study(const SimulationConfig& cfg) {
  if (cfg.replicates < 1 || cfg.level <= 0 || cfg.level >= 1 || cfg.n_per_group < 2) {
    throw InvalidDimension("invalid simulation configuration");
  }
  std::vector<ReplicateResult> results(cfg.replicates);
  parallel_for(cfg.replicates,
               [&](int r) { results[r] = run_replicate(cfg, static_cast<std::uint64_t>(r)); });

  ExperimentReport report;
  report.config = cfg;
  report.replicates_run = cfg.replicates;
  for (ClassifierMethod method : cfg.mean_types) {
    const int idx = method_index(method);
    MethodOutcome outcome;
    outcome.method = method;
    std::vector<int> codes;
    codes.reserve(results.size());
    for (const auto& res : results) {
      switch (res.outcome[idx]) {
        case ReplicateOutcome::Rejected:
          ++outcome.rejections;
          codes.push_back(1);
          break;
        case ReplicateOutcome::Failed:
          ++outcome.failures;
          codes.push_back(2);
          break;
        case ReplicateOutcome::Accepted:
          codes.push_back(0);
          break;
      }
      outcome.runtime_ms += res.runtime_ms[idx];
    }
    report.replicate_outcomes.push_back(std::move(codes));
    const int effective = cfg.replicates - outcome.failures;
    if (outcome.failures > cfg.replicates / 100) {
      throw Error(std::string("classification study: method ") +
                  classifier_method_name(method) + " failed in " +
                  std::to_string(outcome.failures) + " replicates");
    }
    const double p_hat = effective > 0 ? static_cast<double>(outcome.rejections) / effective : 0;
    outcome.rejection_percent = 100.0 * p_hat;
    outcome.std_error_percent =
        effective > 0 ? 100.0 * std::sqrt(p_hat * (1.0 - p_hat) / effective) : 0;
    report.methods.push_back(outcome);
  }
  return report;
}

void write_replicate_csv(const ExperimentReport& report, std::ostream& out) {
  out << "replicate,method,outcome\n";
  for (std::size_t mi = 0; mi < report.methods.size(); ++mi) {
    const char* name = classifier_method_name(report.methods[mi].method);
    const auto& codes = report.replicate_outcomes[mi];
    for (std::size_t r = 0; r < codes.size(); ++r) {
      const char* outcome =
          codes[r] == 1 ? "reject" : codes[r] == 2 ? "fail" : "accept";
      out << r << "," << name << "," << outcome << "\n";
    }
  }
}

RankLawReport rank_law_check(int m, int k, const std::vector<int>& n_values,
                             std::uint64_t seed, int repeats) {
  if (m >= k) {
    throw InvalidDimension("rank law requires m < k");
  }
  RankLawReport report;
  report.m = m;
  report.k = k;
  report.seed = seed;
  report.all_match = true;
  for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
    RankLawEntry entry;
    entry.n = n_values[ni];
    entry.expected_rank = std::min(entry.n * m, k - 1);
    entry.all_match = true;
    for (int rep = 0; rep < repeats; ++rep) {
      Rng rng = Rng::for_stream(seed, ni * static_cast<std::uint64_t>(repeats) + rep);
      Eigen::MatrixXd b = Eigen::MatrixXd::Zero(k - 1, k - 1);
      for (int i = 0; i < entry.n; ++i) {
        Eigen::MatrixXd g(m, k - 1);
        for (Eigen::Index r = 0; r < g.rows(); ++r) {
          for (Eigen::Index c = 0; c < g.cols(); ++c) {
            g(r, c) = rng.normal();
          }
        }
        g /= g.norm();
        b += g.transpose() * g;
      }
      b /= static_cast<double>(entry.n);
      const int rank = gram_rank(b);
      entry.observed_ranks.push_back(rank);
      entry.all_match = entry.all_match && rank == entry.expected_rank;
    }
    report.all_match = report.all_match && entry.all_match;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

Sample concentrated_sample(const PreShape& base, double delta, int n, Rng& rng) {
  std::vector<PreShape> points;
  points.reserve(n);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd g(base.m(), base.k() - 1);
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      for (Eigen::Index c = 0; c < g.cols(); ++c) {
        g(r, c) = rng.normal();
      }
    }
    const double radial = (g.array() * base.entries().array()).sum();
    Eigen::MatrixXd tangent = delta * (g - radial * base.entries());
    points.push_back(sphere_exp(base, TangentVector(std::move(tangent), base)));
  }
  return Sample(std::move(points));
}

PreShape tetrahedron_preshape() {
  Eigen::MatrixXd t(3, 4);
  t << 1, 1, -1, -1,  //
      1, -1, 1, -1,   //
      1, -1, -1, 1;
  return to_preshape(Configuration(std::move(t)));
}

}  // namespace shapestat
