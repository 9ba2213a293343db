#pragma once

#include <Eigen/Dense>

#include "shapestat/preshape.hpp"

namespace shapestat {

/// Result of aligning x onto p over the acting group: the group element g
/// maximizing tr(g x p^T) together with the attained inner product.
struct Alignment {
  Eigen::MatrixXd rotation;  // m x m, orthogonal; det +1 for Group::Rotations
  double inner_product = 0;  // tr(g x p^T), clamped to [-1, 1] for unit inputs
};

/// Tangent vector to the pre-shape sphere at a base point.
class TangentVector {
 public:
  /// Projects the matrix onto the tangent space at `base` (removes the
  /// radial component).
  TangentVector(Eigen::MatrixXd entries, PreShape base);

  const Eigen::MatrixXd& entries() const { return entries_; }
  const PreShape& base() const { return base_; }
  double norm() const { return entries_.norm(); }

 private:
  Eigen::MatrixXd entries_;
  PreShape base_;
};

/// Solves max_g tr(g x p^T) over SO(m) or O(m) via the SVD of p x^T.
Alignment optimal_position(const PreShape& x, const PreShape& p, Group group);

/// arccos of the optimal inner product; the quotient geodesic distance.
double intrinsic_distance(const PreShape& x, const PreShape& y, const ShapeSpace& space);

/// min_g ||g x - y|| = sqrt(2 - 2 <.,.>_opt).
double ziezold_distance(const PreShape& x, const PreShape& y, const ShapeSpace& space);

/// Residual quasi-metric between orbits: sqrt(1 - <.,.>_opt^2).
double procrustes_distance(const PreShape& x, const PreShape& y, const ShapeSpace& space);

/// Inverse exponential on the sphere: the tangent vector at p of length
/// arccos<x,p> pointing at x. Throws CutLocus at the antipode.
TangentVector sphere_log(const PreShape& p, const PreShape& x);

/// Riemannian exponential on the sphere: cos(|v|) p + sin(|v|) v/|v|.
PreShape sphere_exp(const PreShape& p, const TangentVector& v);

/// Removes the vertical component (directions along the group orbit) of a
/// tangent vector. Throws SingularStratum when x x^T has two or more zero
/// eigenvalues (projection not unique on low-rank strata).
TangentVector project_horizontal(const TangentVector& v, Group group);

/// Point at parameter t on the horizontal geodesic from x to the optimally
/// positioned representative of [y]; t=0 gives x, t=1 a representative of [y].
PreShape geodesic_point(const PreShape& x, const PreShape& y, double t,
                        const ShapeSpace& space);

}  // namespace shapestat
