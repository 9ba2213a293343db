#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "shapestat/geometry.hpp"
#include "shapestat/preshape.hpp"

namespace shapestat {

enum class MeanType {
  Intrinsic,
  Ziezold,
  FullProcrustes,
  Residual,
  Extrinsic,
  SchoenbergOrthogonal,
  SchoenbergCentral,
};

/// Weighted collection of pre-shapes of equal dimensions. Weights are
/// nonnegative and sum to 1; the unweighted constructor assigns 1/n.
struct Sample {
  std::vector<PreShape> points;
  std::vector<double> weights;

  explicit Sample(std::vector<PreShape> pts);
  Sample(std::vector<PreShape> pts, std::vector<double> w);

  int size() const { return static_cast<int>(points.size()); }
  int m() const { return points.front().m(); }
  int k() const { return points.front().k(); }
};

struct MeanOptions {
  double tol = 1e-10;
  int max_iter = 1000;
  int restarts = 1;
};

struct MeanEstimate {
  PreShape representative;
  MeanType mean_type;
  int iterations = 0;
  double final_update_norm = 0;
  double objective = 0;  // empirical Frechet value: weighted mean of rho^2
  int rank = 0;
  Regularity regularity = Regularity::Regular;
  bool converged = true;
  bool non_unique = false;
  // Schoenberg means only: rank of the averaged Gram matrix before projection.
  int pre_projection_rank = -1;
};

// ---------------------------------------------------------------------------
// Means on the sphere itself (no group action).
// ---------------------------------------------------------------------------

/// Normalized Euclidean average. Throws UndefinedMean if the average
/// vanishes (e.g. balanced antipodal masses).
PreShape spherical_extrinsic_mean(const Sample& sample);

/// Residual means: the +/- unit eigenvector pair of the second-moment matrix
/// for its largest eigenvalue.
struct ResidualMeanPair {
  PreShape positive;
  PreShape negative;
  double eigen_gap = 0;     // lambda_1 - lambda_2
  bool non_unique = false;  // gap below 1e-10
};
ResidualMeanPair spherical_residual_mean(const Sample& sample);

/// Gradient-descent fixed point of p <- exp_p(weighted mean of log_p x_i);
/// converged when the weighted gradient norm drops below tol.
MeanEstimate spherical_intrinsic_mean(const Sample& sample, const MeanOptions& opt = {},
                                      const std::optional<PreShape>& init = std::nullopt);

// ---------------------------------------------------------------------------
// Means on the quotient shape space.
// ---------------------------------------------------------------------------

/// Alternates optimal positioning with one spherical intrinsic-mean update.
/// With restarts > 1, starts from successive sample points and returns the
/// lowest-objective result.
MeanEstimate intrinsic_mean(const Sample& sample, const ShapeSpace& space,
                            const MeanOptions& opt = {});

/// Alternates optimal positioning with normalized Euclidean averaging.
MeanEstimate ziezold_mean(const Sample& sample, const ShapeSpace& space,
                          const MeanOptions& opt = {});

/// Alternates optimal positioning with the top eigenvector of the positioned
/// sample's second-moment matrix (general Procrustes analysis).
MeanEstimate full_procrustes_mean(const Sample& sample, const ShapeSpace& space,
                                  const MeanOptions& opt = {});

// ---------------------------------------------------------------------------
// Schoenberg embedding of reflection shape space.
// ---------------------------------------------------------------------------

/// Point of the compact convex set P: symmetric PSD with unit trace.
class SchoenbergPoint {
 public:
  explicit SchoenbergPoint(Eigen::MatrixXd gram);

  const Eigen::MatrixXd& gram() const { return gram_; }
  int dim() const { return static_cast<int>(gram_.rows()); }

 private:
  Eigen::MatrixXd gram_;
};

/// The Schoenberg map [x] -> x^T x (invariant under O(m)).
SchoenbergPoint schoenberg_embed(const PreShape& x);

/// Derivative of the Schoenberg map at [x] applied to a horizontal w:
/// x^T w + w^T x.
Eigen::MatrixXd schoenberg_derivative(const PreShape& x, const TangentVector& w);

struct SchoenbergProjection {
  SchoenbergPoint point;
  bool non_unique = false;  // lambda_r - lambda_{r+1} below 1e-10
};

/// Orthogonal projection onto the rank-r stratum: the leading r eigenvalues
/// become lambda_i + 1/r - mean(lambda_1..r), the rest are zeroed. Throws
/// NotInDomain when the projection leaves the stratum.
SchoenbergProjection project_orthogonal(const SchoenbergPoint& a, int r);

/// Central projection: leading r eigenvalues rescaled to sum 1.
SchoenbergProjection project_central(const SchoenbergPoint& a, int r);

/// Reconstructs a pre-shape representative from a rank-r Gram matrix,
/// zero-padded to m rows. Throws RankMismatch if rank(a) != r or r > m.
PreShape schoenberg_inverse(const SchoenbergPoint& a, int r, int m);

enum class SchoenbergProjectionKind { Orthogonal, Central };

/// Extrinsic mean through the Schoenberg embedding: average the Gram images,
/// project to rank r, map back. Requires the reflection group.
MeanEstimate schoenberg_mean(const Sample& sample, const ShapeSpace& space, int r,
                             SchoenbergProjectionKind projection);

namespace detail {

/// Projection formulas on sorted-descending eigenvalues; shared by the public
/// operations and exercised directly by tests (including out-of-domain input).
std::vector<double> orthogonal_projection_eigenvalues(const std::vector<double>& lambda, int r);
std::vector<double> central_projection_eigenvalues(const std::vector<double>& lambda, int r);

}  // namespace detail

}  // namespace shapestat
