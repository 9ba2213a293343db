#pragma once

#include <Eigen/Dense>

#include "shapestat/errors.hpp"

namespace shapestat {

/// Group acting on the pre-shape sphere: SO(m) for Kendall shape space,
/// O(m) for reflection shape space.
enum class Group { Rotations, RotationsAndReflections };

enum class Regularity { Regular, Singular };

/// Descriptor of the quotient all operations act in: k landmarks in
/// dimension m, modulo rotations or rotations-and-reflections.
struct ShapeSpace {
  int m = 0;
  int k = 0;
  Group group = Group::Rotations;

  ShapeSpace(int m_, int k_, Group group_);
};

/// Raw landmark configuration: one column per landmark, one row per
/// coordinate axis (an element of M(m,k)).
class Configuration {
 public:
  explicit Configuration(Eigen::MatrixXd entries);

  const Eigen::MatrixXd& entries() const { return entries_; }
  int m() const { return static_cast<int>(entries_.rows()); }
  int k() const { return static_cast<int>(entries_.cols()); }

 private:
  Eigen::MatrixXd entries_;
};

/// Centered, unit Frobenius norm m x (k-1) matrix; a point on the
/// pre-shape sphere S_m^k.
class PreShape {
 public:
  /// Accepts a matrix with Frobenius norm 1 within 1e-12 and stores the
  /// exactly renormalized copy.
  explicit PreShape(Eigen::MatrixXd entries);

  const Eigen::MatrixXd& entries() const { return entries_; }
  int m() const { return static_cast<int>(entries_.rows()); }
  int k() const { return static_cast<int>(entries_.cols()) + 1; }

 private:
  Eigen::MatrixXd entries_;
};

/// k x (k-1) sub-Helmert matrix in the Dryden-Mardia convention: column j
/// has j entries (j(j+1))^{-1/2} followed by -j (j(j+1))^{-1/2}, then zeros.
/// Columns are orthonormal and orthogonal to the all-ones vector.
Eigen::MatrixXd helmert_submatrix(int k);

/// Removes translation: returns c * H, an m x (k-1) matrix.
Eigen::MatrixXd helmertize(const Configuration& c);

/// Centers and scales a configuration to unit size.
/// Throws DegenerateConfiguration if the centered norm is below 1e-12.
PreShape to_preshape(const Configuration& c);

/// Pads x with zero rows up to target_m (the canonical embedding
/// S_m^k -> S_{m'}^k). Requires x.m <= target_m < k.
PreShape embed(const PreShape& x, int target_m);

/// Number of singular values exceeding tol times the largest one.
int rank_of(const PreShape& x, double tol = 1e-9);

/// Regular iff rank >= m-1 for rotations, rank = m for
/// rotations-and-reflections.
Regularity regularity(const PreShape& x, const ShapeSpace& space, double rank_tol = 1e-9);

}  // namespace shapestat
