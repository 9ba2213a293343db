#pragma once

#include <Eigen/Dense>

#include "shapestat/geometry.hpp"
#include "shapestat/preshape.hpp"
#include "shapestat/rng.hpp"

namespace testhelpers {

inline Eigen::MatrixXd random_matrix(int rows, int cols, shapestat::Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      m(i, j) = rng.normal();
    }
  }
  return m;
}

inline shapestat::PreShape random_preshape(int m, int k, shapestat::Rng& rng) {
  return shapestat::to_preshape(shapestat::Configuration(random_matrix(m, k, rng)));
}

inline Eigen::MatrixXd random_rotation(int m, shapestat::Rng& rng) {
  const Eigen::MatrixXd g = random_matrix(m, m, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  if (q.determinant() < 0) {
    q.col(0) = -q.col(0);
  }
  return q;
}

inline Eigen::MatrixXd random_orthogonal(int m, shapestat::Rng& rng) {
  Eigen::MatrixXd q = random_rotation(m, rng);
  if (rng.uniform() < 0.5) {
    q.col(0) = -q.col(0);
  }
  return q;
}

/// Group-invariant gap between two shapes, evaluated as the aligned chordal
/// norm: unlike arccos of the inner product it stays accurate near zero.
inline double shape_gap(const shapestat::PreShape& a, const shapestat::PreShape& b,
                        shapestat::Group group) {
  const shapestat::Alignment al = shapestat::optimal_position(a, b, group);
  return (al.rotation * a.entries() - b.entries()).norm();
}

/// Sharpness pair in S_2^4 with alpha^2 + beta^2 = 1: two planar
/// quadrilaterals whose means drop a dimension in the planar quotient only.
struct SharpnessPair {
  shapestat::PreShape x;
  shapestat::PreShape y;
  shapestat::PreShape z;
};

inline SharpnessPair sharpness_pair(double alpha_sq = 0.8) {
  const double alpha = std::sqrt(alpha_sq);
  const double beta = std::sqrt(1.0 - alpha_sq);
  Eigen::MatrixXd x(2, 3), y(2, 3), z(2, 3);
  x << alpha, 0, 0, 0, beta, 0;
  y << alpha, 0, 0, 0, -beta, 0;
  z << 1, 0, 0, 0, 0, 0;
  return {shapestat::PreShape(x), shapestat::PreShape(y), shapestat::PreShape(z)};
}

}  // namespace testhelpers
