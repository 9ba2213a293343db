#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "shapestat/means.hpp"
#include "shapestat/rng.hpp"
#include "shapestat/tangent.hpp"

namespace shapestat {

/// Mean/coordinate pairings compared in the classification study.
enum class ClassifierMethod {
  IntrinsicIntrinsic,  // intrinsic mean, intrinsic tangent coordinates
  IntrinsicResidual,   // intrinsic mean, residual tangent coordinates
  ZiezoldResidual,     // Ziezold mean, residual tangent coordinates
  SchoenbergResidual,  // Schoenberg mean, residual tangent coordinates
};

struct SimulationConfig {
  double epsilon = 0.0;
  double sigma2 = 0.2;
  int n_per_group = 10;
  int replicates = 1000;
  double level = 0.05;
  std::uint64_t seed = 0;
  // PCA cap for the per-replicate tests; -1 selects 3(n1+n2)/5, which keeps
  // the pooled covariance well conditioned at the study's sample sizes.
  int max_components = -1;
  std::vector<ClassifierMethod> mean_types{
      ClassifierMethod::IntrinsicIntrinsic, ClassifierMethod::IntrinsicResidual,
      ClassifierMethod::ZiezoldResidual, ClassifierMethod::SchoenbergResidual};
};

struct RatioReport {
  double d_iz = 0;            // intrinsic <-> Ziezold
  double d_pz = 0;            // Procrustes <-> Ziezold
  double d_pi = 0;            // Procrustes <-> intrinsic
  double concentration = 0;   // (1 - |E(Y)|)^2, sample positioned to the Ziezold mean
  double ratio = 0;           // d_iz / d_pi
  double cross_distance = 0;  // Ziezold mean to the 1/4 point of the i->p geodesic
};

struct CounterexampleResult {
  MeanEstimate full_procrustes;
  MeanEstimate intrinsic;
  MeanEstimate ziezold;
  double procrustes_distance_to_p1 = 0;
  double intrinsic_distance_to_p1 = 0;
  double ziezold_distance_to_p1 = 0;
};

struct BlindnessResult {
  MeanEstimate intrinsic_pair;
  MeanEstimate intrinsic_triple;
  MeanEstimate schoenberg_pair;
  MeanEstimate schoenberg_triple;
  double intrinsic_movement = 0;
  double schoenberg_movement = 0;
  double movement_ratio = 0;  // intrinsic / Schoenberg
};

struct MethodOutcome {
  ClassifierMethod method;
  int rejections = 0;
  int failures = 0;
  double rejection_percent = 0;
  double std_error_percent = 0;  // Monte Carlo standard error, percentage points
  double runtime_ms = 0;
};

struct ExperimentReport {
  SimulationConfig config;
  int replicates_run = 0;
  std::vector<MethodOutcome> methods;
  // Per configured method, one code per replicate: 0 accept, 1 reject, 2 fail.
  std::vector<std::vector<int>> replicate_outcomes;
};

/// Writes the per-replicate outcomes as CSV (replicate,method,outcome).
void write_replicate_csv(const ExperimentReport& report, std::ostream& out);

struct RankLawEntry {
  int n = 0;
  int expected_rank = 0;
  std::vector<int> observed_ranks;  // one per repeat
  bool all_match = false;
};

struct RankLawReport {
  int m = 0;
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<RankLawEntry> entries;
  bool all_match = false;
};

/// The 3x8 cube/pyramid family: epsilon = 1 gives the unit cube, epsilon = 0
/// the flattened pyramid.
Configuration cube_pyramid_config(double epsilon);

/// Adds i.i.d. N(0, sigma2) noise to every entry (row-major draw order).
Configuration perturb(const Configuration& c, double sigma2, Rng& rng);

/// Computes intrinsic, Ziezold and full Procrustes means of the sample, their
/// mutual shape distances, the concentration parameter, and the distance from
/// the Ziezold mean to the 1:3 point of the intrinsic->Procrustes geodesic.
/// Throws MeansCoincide when any pair of means is closer than 10*tol.
RatioReport ratio_check(const Sample& sample, const ShapeSpace& space,
                        const MeanOptions& opt = {});

/// The weighted sample (q1: 2/3, q2: 1/3) whose full Procrustes mean drops to
/// a collinear (singular) shape while intrinsic and Ziezold means stay regular.
CounterexampleResult procrustes_counterexample();

/// Triangles built from the non-isometry generators: compares how far the
/// intrinsic and Schoenberg means move when a third point is added along the
/// direction the Schoenberg embedding nearly collapses.
BlindnessResult blindness_demo(double phi, double beta);

/// Table-style cube vs pyramid discrimination study: per replicate, draws
/// noisy groups, computes per-method pooled means and tangent coordinates,
/// and counts Hotelling rejections.
ExperimentReport classification_study(const SimulationConfig& cfg);

/// Draws n uniform pre-shapes per entry and checks that the averaged Gram
/// matrix has rank min(n*m, k-1).
RankLawReport rank_law_check(int m, int k, const std::vector<int>& n_values,
                             std::uint64_t seed, int repeats = 1);

/// Synthetic concentrated sample for the 1:3 study: tangent Gaussian
/// perturbations of standard deviation delta at a base shape, pushed through
/// the exponential map.
Sample concentrated_sample(const PreShape& base, double delta, int n, Rng& rng);

/// Pre-shape of the regular tetrahedron (m = 3, k = 4).
PreShape tetrahedron_preshape();

const char* classifier_method_name(ClassifierMethod method);

}  // namespace shapestat
