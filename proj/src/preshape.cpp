#include "shapestat/preshape.hpp"

#include <cmath>
#include <string>

namespace shapestat {

namespace {

constexpr double kUnitNormTol = 1e-12;

}  // namespace

ShapeSpace::ShapeSpace(int m_, int k_, Group group_) : m(m_), k(k_), group(group_) {
  if (m < 1 || k <= m) {
    throw InvalidDimension("ShapeSpace requires k > m >= 1, got m=" + std::to_string(m) +
                           ", k=" + std::to_string(k));
  }
}

Configuration::Configuration(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (m() < 1 || k() <= m()) {
    throw InvalidDimension("Configuration requires k > m >= 1, got m=" + std::to_string(m()) +
                           ", k=" + std::to_string(k()));
  }
}

PreShape::PreShape(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.cols() < 1) {
    throw InvalidDimension("PreShape matrix must be nonempty");
  }
  const double norm = entries_.norm();
  if (std::abs(norm - 1.0) > kUnitNormTol) {
    throw DegenerateConfiguration("PreShape norm deviates from 1 by " +
                                  std::to_string(std::abs(norm - 1.0)));
  }
  entries_ /= norm;
}

Eigen::MatrixXd helmert_submatrix(int k) {
  if (k < 2) {
    throw InvalidDimension("Helmert sub-matrix needs k >= 2");
  }
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k, k - 1);
  for (int j = 1; j < k; ++j) {
    const double a = 1.0 / std::sqrt(static_cast<double>(j) * (j + 1));
    for (int i = 0; i < j; ++i) {
      h(i, j - 1) = a;
    }
    h(j, j - 1) = -static_cast<double>(j) * a;
  }
  return h;
}

Eigen::MatrixXd helmertize(const Configuration& c) {
  return c.entries() * helmert_submatrix(c.k());
}

PreShape to_preshape(const Configuration& c) {
  Eigen::MatrixXd centered = helmertize(c);
  const double norm = centered.norm();
  if (norm < kUnitNormTol) {
    throw DegenerateConfiguration("all landmarks coincide: centered norm " +
                                  std::to_string(norm));
  }
  return PreShape(centered / norm);
}

PreShape embed(const PreShape& x, int target_m) {
  if (target_m < x.m()) {
    throw InvalidDimension("embedding cannot drop rows: target_m=" + std::to_string(target_m) +
                           " < m=" + std::to_string(x.m()));
  }
  if (target_m >= x.k()) {
    throw InvalidDimension("embedding requires target_m < k, got target_m=" +
                           std::to_string(target_m) + ", k=" + std::to_string(x.k()));
  }
  if (target_m == x.m()) {
    return x;
  }
  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(target_m, x.k() - 1);
  padded.topRows(x.m()) = x.entries();
  return PreShape(std::move(padded));
}

int rank_of(const PreShape& x, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x.entries());
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) {
    return 0;
  }
  const double cutoff = tol * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) {
      ++rank;
    }
  }
  return rank;
}

Regularity regularity(const PreShape& x, const ShapeSpace& space, double rank_tol) {
  if (x.m() != space.m) {
    throw InvalidDimension("pre-shape dimension m=" + std::to_string(x.m()) +
                           " does not match space m=" + std::to_string(space.m));
  }
  const int rank = rank_of(x, rank_tol);
  if (space.group == Group::Rotations) {
    return rank >= space.m - 1 ? Regularity::Regular : Regularity::Singular;
  }
  return rank == space.m ? Regularity::Regular : Regularity::Singular;
}

}  // namespace shapestat
