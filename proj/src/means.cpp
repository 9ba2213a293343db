#include "shapestat/means.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "shapestat/matrix_utils.hpp"

namespace shapestat {

namespace {

constexpr double kEigenGapTol = 1e-10;
constexpr double kVanishTol = 1e-12;

void check_sample(const Sample& sample) {
  if (sample.points.empty()) {
    throw UndefinedMean("empty sample");
  }
  const int m = sample.points.front().m();
  const int k = sample.points.front().k();
  for (const auto& p : sample.points) {
    if (p.m() != m || p.k() != k) {
      throw InvalidDimension("sample mixes pre-shape dimensions");
    }
  }
}

/// Group-invariant distance between successive iterates, computed as the
/// aligned chordal norm min_g ||g a - b|| (stable near zero, unlike arccos).
double aligned_difference_norm(const PreShape& a, const PreShape& b, Group group) {
  const Alignment al = optimal_position(a, b, group);
  return (al.rotation * a.entries() - b.entries()).norm();
}

std::vector<Eigen::MatrixXd> position_all(const Sample& sample, const PreShape& p,
                                          Group group) {
  std::vector<Eigen::MatrixXd> positioned;
  positioned.reserve(sample.points.size());
  for (const auto& x : sample.points) {
    const Alignment al = optimal_position(x, p, group);
    positioned.push_back(al.rotation * x.entries());
  }
  return positioned;
}

Eigen::MatrixXd second_moment(const std::vector<Eigen::MatrixXd>& mats,
                              const std::vector<double>& weights) {
  const Eigen::Index d = mats.front().size();
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const Eigen::VectorXd v = flatten_rowmajor(mats[i]);
    t += weights[i] * v * v.transpose();
  }
  return t;
}

struct IterationResult {
  PreShape p;
  int iterations = 0;
  double final_update_norm = 0;
  bool non_unique = false;
};

/// Common loop of all alternating estimators: position the sample to the
/// current iterate, apply one update step, stop when successive iterates are
/// closer than tol in shape distance.
IterationResult iterate_mean(
    const Sample& sample, const ShapeSpace& space, const PreShape& init,
    const MeanOptions& opt,
    const std::function<Eigen::MatrixXd(const std::vector<Eigen::MatrixXd>&, const PreShape&,
                                        bool*)>& update) {
  IterationResult res{init};
  for (int iter = 1; iter <= opt.max_iter; ++iter) {
    const auto positioned = position_all(sample, res.p, space.group);
    bool tie = false;
    PreShape p_new(update(positioned, res.p, &tie));
    res.non_unique = res.non_unique || tie;
    res.final_update_norm = aligned_difference_norm(p_new, res.p, space.group);
    res.p = std::move(p_new);
    res.iterations = iter;
    if (res.final_update_norm < opt.tol) {
      return res;
    }
  }
  throw NoConvergence("mean iteration did not converge within " +
                      std::to_string(opt.max_iter) + " iterations");
}

double frechet_objective(const Sample& sample, const PreShape& p, const ShapeSpace& space,
                         MeanType type) {
  double obj = 0;
  for (int i = 0; i < sample.size(); ++i) {
    double rho = 0;
    switch (type) {
      case MeanType::Intrinsic:
        rho = intrinsic_distance(sample.points[i], p, space);
        break;
      case MeanType::Ziezold:
        rho = ziezold_distance(sample.points[i], p, space);
        break;
      case MeanType::FullProcrustes:
        rho = procrustes_distance(sample.points[i], p, space);
        break;
      default:
        throw Error("no Frechet objective for this mean type");
    }
    obj += sample.weights[i] * rho * rho;
  }
  return obj;
}

MeanEstimate finalize(PreShape p, MeanType type, const Sample& sample, const ShapeSpace& space,
                      const IterationResult& it) {
  MeanEstimate est{std::move(p), type};
  est.iterations = it.iterations;
  est.final_update_norm = it.final_update_norm;
  est.objective = frechet_objective(sample, est.representative, space, type);
  est.rank = rank_of(est.representative);
  est.regularity = regularity(est.representative, space);
  est.non_unique = it.non_unique;
  return est;
}

/// Runs the iteration from up to `restarts` sample points and keeps the
/// lowest-objective result; flags non-uniqueness when another restart matches
/// the objective but lands at a different shape.
template <typename Updater>
MeanEstimate with_restarts(const Sample& sample, const ShapeSpace& space,
                           const MeanOptions& opt, MeanType type, Updater&& update) {
  const int n_starts = std::max(1, std::min(opt.restarts, sample.size()));
  std::optional<MeanEstimate> best;
  std::vector<MeanEstimate> all;
  for (int s = 0; s < n_starts; ++s) {
    const IterationResult it = iterate_mean(sample, space, sample.points[s], opt, update);
    MeanEstimate est = finalize(it.p, type, sample, space, it);
    all.push_back(est);
    if (!best || est.objective < best->objective) {
      best = std::move(est);
    }
  }
  for (const auto& est : all) {
    if (std::abs(est.objective - best->objective) < 10 * opt.tol &&
        aligned_difference_norm(est.representative, best->representative, space.group) >
            10 * opt.tol) {
      best->non_unique = true;
    }
  }
  return *best;
}

}  // namespace

Sample::Sample(std::vector<PreShape> pts)
    : points(std::move(pts)),
      weights(points.size(), points.empty() ? 0.0 : 1.0 / static_cast<double>(points.size())) {
  check_sample(*this);
}

Sample::Sample(std::vector<PreShape> pts, std::vector<double> w)
    : points(std::move(pts)), weights(std::move(w)) {
  check_sample(*this);
  if (weights.size() != points.size()) {
    throw InvalidDimension("weight count does not match sample size");
  }
  double total = 0;
  for (double wi : weights) {
    if (wi < 0) {
      throw InvalidDimension("negative sample weight");
    }
    total += wi;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidDimension("weights must sum to 1, got " + std::to_string(total));
  }
  for (double& wi : weights) {
    wi /= total;
  }
}

PreShape spherical_extrinsic_mean(const Sample& sample) {
  check_sample(sample);
  Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(sample.points.front().m(), sample.k() - 1);
  for (int i = 0; i < sample.size(); ++i) {
    avg += sample.weights[i] * sample.points[i].entries();
  }
  const double norm = avg.norm();
  if (norm < kVanishTol) {
    throw UndefinedMean("Euclidean average of the sample vanishes");
  }
  return PreShape(avg / norm);
}

ResidualMeanPair spherical_residual_mean(const Sample& sample) {
  check_sample(sample);
  std::vector<Eigen::MatrixXd> mats;
  mats.reserve(sample.points.size());
  for (const auto& x : sample.points) {
    mats.push_back(x.entries());
  }
  const Eigen::MatrixXd t = second_moment(mats, sample.weights);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
  const Eigen::Index d = t.rows();
  const Eigen::VectorXd top = eig.eigenvectors().col(d - 1);
  const double gap = d > 1 ? eig.eigenvalues()(d - 1) - eig.eigenvalues()(d - 2)
                           : std::numeric_limits<double>::infinity();
  const int m = sample.points.front().m();
  PreShape plus(unflatten_rowmajor(top, m, sample.k() - 1));
  PreShape minus(-plus.entries());
  return ResidualMeanPair{std::move(plus), std::move(minus), gap, gap < kEigenGapTol};
}

MeanEstimate spherical_intrinsic_mean(const Sample& sample, const MeanOptions& opt,
                                      const std::optional<PreShape>& init) {
  check_sample(sample);
  PreShape p = init.value_or(sample.points.front());
  int iterations = 0;
  double grad_norm = 0;
  bool converged = false;
  for (int iter = 1; iter <= opt.max_iter; ++iter) {
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(p.m(), p.k() - 1);
    for (int i = 0; i < sample.size(); ++i) {
      grad += sample.weights[i] * sphere_log(p, sample.points[i]).entries();
    }
    iterations = iter;
    grad_norm = grad.norm();
    if (grad_norm < opt.tol) {
      converged = true;
      break;
    }
    p = sphere_exp(p, TangentVector(grad, p));
  }
  if (!converged) {
    throw NoConvergence("spherical intrinsic mean did not converge within " +
                        std::to_string(opt.max_iter) + " iterations");
  }

  MeanEstimate est{std::move(p), MeanType::Intrinsic};
  est.iterations = iterations;
  est.final_update_norm = grad_norm;
  double obj = 0;
  for (int i = 0; i < sample.size(); ++i) {
    const double a =
        std::acos(std::clamp((est.representative.entries().array() *
                              sample.points[i].entries().array()).sum(), -1.0, 1.0));
    obj += sample.weights[i] * a * a;
  }
  est.objective = obj;
  est.rank = rank_of(est.representative);
  est.regularity = regularity(est.representative,
                              ShapeSpace(est.representative.m(), est.representative.k(),
                                         Group::Rotations));
  return est;
}

MeanEstimate intrinsic_mean(const Sample& sample, const ShapeSpace& space,
                            const MeanOptions& opt) {
  check_sample(sample);
  auto update = [&sample](const std::vector<Eigen::MatrixXd>& positioned, const PreShape& p,
                          bool* /*tie*/) {
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(p.m(), p.k() - 1);
    for (std::size_t i = 0; i < positioned.size(); ++i) {
      grad += sample.weights[i] * sphere_log(p, PreShape(positioned[i])).entries();
    }
    return sphere_exp(p, TangentVector(grad, p)).entries();
  };
  return with_restarts(sample, space, opt, MeanType::Intrinsic, update);
}

MeanEstimate ziezold_mean(const Sample& sample, const ShapeSpace& space,
                          const MeanOptions& opt) {
  check_sample(sample);
  auto update = [&sample](const std::vector<Eigen::MatrixXd>& positioned, const PreShape& p,
                          bool* /*tie*/) {
    Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(p.m(), p.k() - 1);
    for (std::size_t i = 0; i < positioned.size(); ++i) {
      avg += sample.weights[i] * positioned[i];
    }
    const double norm = avg.norm();
    if (norm < kVanishTol) {
      throw UndefinedMean("Euclidean average vanished during Ziezold iteration");
    }
    return Eigen::MatrixXd(avg / norm);
  };
  return with_restarts(sample, space, opt, MeanType::Ziezold, update);
}

MeanEstimate full_procrustes_mean(const Sample& sample, const ShapeSpace& space,
                                  const MeanOptions& opt) {
  check_sample(sample);
  const int m = sample.points.front().m();
  const int cols = sample.k() - 1;
  auto update = [&sample, m, cols](const std::vector<Eigen::MatrixXd>& positioned,
                                   const PreShape& p, bool* tie) {
    const Eigen::MatrixXd t = second_moment(positioned, sample.weights);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
    const Eigen::Index d = t.rows();
    Eigen::VectorXd top = eig.eigenvectors().col(d - 1);
    if (d > 1 && eig.eigenvalues()(d - 1) - eig.eigenvalues()(d - 2) < kEigenGapTol) {
      *tie = true;
    }
    if (top.dot(flatten_rowmajor(p.entries())) < 0) {
      top = -top;
    }
    return unflatten_rowmajor(top, m, cols);
  };
  MeanOptions single = opt;
  single.restarts = 1;
  return with_restarts(sample, space, single, MeanType::FullProcrustes, update);
}

SchoenbergPoint::SchoenbergPoint(Eigen::MatrixXd gram) : gram_(std::move(gram)) {
  if (gram_.rows() != gram_.cols()) {
    throw InvalidDimension("Gram matrix must be square");
  }
  if ((gram_ - gram_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidDimension("Gram matrix must be symmetric");
  }
  gram_ = ((gram_ + gram_.transpose()) / 2.0).eval();
  if (std::abs(gram_.trace() - 1.0) > 1e-10) {
    throw InvalidDimension("Gram matrix must have unit trace, got " +
                           std::to_string(gram_.trace()));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues()(0) < -1e-10) {
    throw InvalidDimension("Gram matrix must be positive semidefinite");
  }
}

SchoenbergPoint schoenberg_embed(const PreShape& x) {
  return SchoenbergPoint(x.entries().transpose() * x.entries());
}

Eigen::MatrixXd schoenberg_derivative(const PreShape& x, const TangentVector& w) {
  return x.entries().transpose() * w.entries() + w.entries().transpose() * x.entries();
}

namespace detail {

std::vector<double> orthogonal_projection_eigenvalues(const std::vector<double>& lambda,
                                                      int r) {
  const int n = static_cast<int>(lambda.size());
  if (r < 1 || r > n) {
    throw InvalidDimension("projection rank out of range");
  }
  if (lambda[r - 1] <= 0) {
    throw NotInDomain("orthogonal projection requires lambda_r > 0");
  }
  const double lbar = std::accumulate(lambda.begin(), lambda.begin() + r, 0.0) / r;
  std::vector<double> mu(n, 0.0);
  for (int i = 0; i < r; ++i) {
    mu[i] = lambda[i] + 1.0 / r - lbar;
    if (mu[i] <= 0) {
      throw NotInDomain("orthogonal projection leaves the rank-" + std::to_string(r) +
                        " stratum (mu_" + std::to_string(i + 1) + " <= 0)");
    }
  }
  return mu;
}

std::vector<double> central_projection_eigenvalues(const std::vector<double>& lambda, int r) {
  const int n = static_cast<int>(lambda.size());
  if (r < 1 || r > n) {
    throw InvalidDimension("projection rank out of range");
  }
  if (lambda[r - 1] <= 0) {
    throw NotInDomain("central projection requires lambda_r > 0");
  }
  const double lbar = std::accumulate(lambda.begin(), lambda.begin() + r, 0.0) / r;
  std::vector<double> nu(n, 0.0);
  for (int i = 0; i < r; ++i) {
    nu[i] = lambda[i] / (r * lbar);
  }
  return nu;
}

}  // namespace detail

namespace {

struct EigenDescending {
  std::vector<double> values;
  Eigen::MatrixXd vectors;  // columns match values
};

EigenDescending eigen_descending(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  const Eigen::Index n = sym.rows();
  EigenDescending out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values[i] = eig.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = eig.eigenvectors().col(n - 1 - i);
  }
  return out;
}

SchoenbergProjection project_impl(const SchoenbergPoint& a, int r, bool orthogonal) {
  const EigenDescending eig = eigen_descending(a.gram());
  const std::vector<double> projected =
      orthogonal ? detail::orthogonal_projection_eigenvalues(eig.values, r)
                 : detail::central_projection_eigenvalues(eig.values, r);
  Eigen::MatrixXd result = Eigen::MatrixXd::Zero(a.dim(), a.dim());
  for (int i = 0; i < r; ++i) {
    result += projected[i] * eig.vectors.col(i) * eig.vectors.col(i).transpose();
  }
  const bool tie = r < a.dim() && eig.values[r - 1] - eig.values[r] < kEigenGapTol;
  return SchoenbergProjection{SchoenbergPoint(std::move(result)), tie};
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

}  // namespace

SchoenbergProjection project_orthogonal(const SchoenbergPoint& a, int r) {
  return project_impl(a, r, true);
}

SchoenbergProjection project_central(const SchoenbergPoint& a, int r) {
  return project_impl(a, r, false);
}

PreShape schoenberg_inverse(const SchoenbergPoint& a, int r, int m) {
  if (r > m) {
    throw RankMismatch("cannot place a rank-" + std::to_string(r) + " Gram matrix in " +
                       std::to_string(m) + " dimensions");
  }
  if (gram_rank(a.gram()) != r) {
    throw RankMismatch("Gram matrix rank " + std::to_string(gram_rank(a.gram())) +
                       " does not match requested rank " + std::to_string(r));
  }
  const EigenDescending eig = eigen_descending(a.gram());
  Eigen::MatrixXd rep = Eigen::MatrixXd::Zero(m, a.dim());
  for (int i = 0; i < r; ++i) {
    rep.row(i) = std::sqrt(std::max(0.0, eig.values[i])) * eig.vectors.col(i).transpose();
  }
  return PreShape(rep / rep.norm());
}

MeanEstimate schoenberg_mean(const Sample& sample, const ShapeSpace& space, int r,
                             SchoenbergProjectionKind projection) {
  check_sample(sample);
  if (space.group != Group::RotationsAndReflections) {
    throw Error("Schoenberg means are defined on reflection shape space only");
  }
  if (r < 1 || r > space.m) {
    throw InvalidDimension("Schoenberg rank must satisfy 1 <= r <= m");
  }
  const int km1 = sample.k() - 1;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(km1, km1);
  for (int i = 0; i < sample.size(); ++i) {
    b += sample.weights[i] * sample.points[i].entries().transpose() *
         sample.points[i].entries();
  }
  const SchoenbergPoint average(b);
  const SchoenbergProjection proj =
      projection == SchoenbergProjectionKind::Orthogonal ? project_orthogonal(average, r)
                                                         : project_central(average, r);
  PreShape rep = schoenberg_inverse(proj.point, r, space.m);

  MeanEstimate est{std::move(rep), projection == SchoenbergProjectionKind::Orthogonal
                                       ? MeanType::SchoenbergOrthogonal
                                       : MeanType::SchoenbergCentral};
  est.iterations = 0;
  est.final_update_norm = 0;
  double obj = 0;
  for (int i = 0; i < sample.size(); ++i) {
    const Eigen::MatrixXd diff =
        sample.points[i].entries().transpose() * sample.points[i].entries() -
        proj.point.gram();
    obj += sample.weights[i] * diff.squaredNorm();
  }
  est.objective = obj;
  est.rank = rank_of(est.representative);
  est.regularity = regularity(est.representative, space);
  est.non_unique = proj.non_unique;
  est.pre_projection_rank = gram_rank(b);
  return est;
}

}  // namespace shapestat
