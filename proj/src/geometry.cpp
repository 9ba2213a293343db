#include "shapestat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace shapestat {

namespace {

constexpr double kCutLocusTol = 1e-12;
constexpr double kSmallAngle = 1e-6;

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

TangentVector::TangentVector(Eigen::MatrixXd entries, PreShape base)
    : entries_(std::move(entries)), base_(std::move(base)) {
  if (entries_.rows() != base_.entries().rows() || entries_.cols() != base_.entries().cols()) {
    throw InvalidDimension("tangent vector and base dimensions differ");
  }
  const double radial = (entries_.array() * base_.entries().array()).sum();
  entries_ -= radial * base_.entries();
}

Alignment optimal_position(const PreShape& x, const PreShape& p, Group group) {
  if (x.m() != p.m() || x.k() != p.k()) {
    throw InvalidDimension("optimal_position requires equal dimensions");
  }
  const Eigen::MatrixXd cross = p.entries() * x.entries().transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd& u = svd.matrixU();
  const Eigen::MatrixXd& v = svd.matrixV();
  const auto& sv = svd.singularValues();
  const int m = x.m();

  Alignment result;
  double ip = sv.sum();
  if (group == Group::Rotations && (u * v.transpose()).determinant() < 0.0) {
    // SO(m): flip the sign of the smallest singular value's contribution.
    Eigen::VectorXd signs = Eigen::VectorXd::Ones(m);
    signs(m - 1) = -1.0;
    result.rotation = u * signs.asDiagonal() * v.transpose();
    ip -= 2.0 * sv(m - 1);
  } else {
    result.rotation = u * v.transpose();
  }
  result.inner_product = clamp_unit(ip);
  return result;
}

double intrinsic_distance(const PreShape& x, const PreShape& y, const ShapeSpace& space) {
  return std::acos(optimal_position(x, y, space.group).inner_product);
}

double ziezold_distance(const PreShape& x, const PreShape& y, const ShapeSpace& space) {
  const double ip = optimal_position(x, y, space.group).inner_product;
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * ip));
}

double procrustes_distance(const PreShape& x, const PreShape& y, const ShapeSpace& space) {
  const double ip = optimal_position(x, y, space.group).inner_product;
  return std::sqrt(std::max(0.0, 1.0 - ip * ip));
}

TangentVector sphere_log(const PreShape& p, const PreShape& x) {
  const double cos_a = clamp_unit((p.entries().array() * x.entries().array()).sum());
  if (cos_a < -1.0 + kCutLocusTol) {
    throw CutLocus("sphere_log at the antipode of the base point");
  }
  const double alpha = std::acos(cos_a);
  // alpha/sin(alpha), with a series branch near zero.
  double factor;
  if (alpha < kSmallAngle) {
    factor = 1.0 + alpha * alpha / 6.0;
  } else {
    factor = alpha / std::sin(alpha);
  }
  Eigen::MatrixXd v = factor * (x.entries() - cos_a * p.entries());
  return TangentVector(std::move(v), p);
}

PreShape sphere_exp(const PreShape& p, const TangentVector& v) {
  if ((v.base().entries() - p.entries()).norm() > 1e-12) {
    throw InvalidDimension("tangent vector is based at a different point");
  }
  const double t = v.norm();
  if (t == 0.0) {
    return p;
  }
  double sinc;
  if (t < kSmallAngle) {
    sinc = 1.0 - t * t / 6.0;
  } else {
    sinc = std::sin(t) / t;
  }
  Eigen::MatrixXd result = std::cos(t) * p.entries() + sinc * v.entries();
  result /= result.norm();
  return PreShape(std::move(result));
}

TangentVector project_horizontal(const TangentVector& v, Group /*group*/) {
  // The vertical space at x is {A x : A skew}; both SO(m) and O(m) share it.
  const Eigen::MatrixXd& x = v.base().entries();
  const int m = static_cast<int>(x.rows());
  if (m == 1) {
    return v;  // so(1) = {0}: everything is horizontal
  }

  const Eigen::MatrixXd s = x * x.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  int zeros = 0;
  for (int i = 0; i < m; ++i) {
    if (lambda(i) < kCutLocusTol) {
      ++zeros;
    }
  }
  if (zeros >= 2) {
    throw SingularStratum("vertical projection not unique: x x^T has " +
                          std::to_string(zeros) + " zero eigenvalues");
  }

  // Solve A (x x^T) + (x x^T) A = v x^T - x v^T for skew A in the eigenbasis.
  const Eigen::MatrixXd& q = eig.eigenvectors();
  const Eigen::MatrixXd c = v.entries() * x.transpose() - x * v.entries().transpose();
  const Eigen::MatrixXd c_tilde = q.transpose() * c * q;
  Eigen::MatrixXd a_tilde = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j) {
        continue;  // diagonal of a skew matrix is zero
      }
      a_tilde(i, j) = c_tilde(i, j) / (lambda(i) + lambda(j));
    }
  }
  const Eigen::MatrixXd a = q * a_tilde * q.transpose();
  Eigen::MatrixXd horizontal = v.entries() - a * x;
  return TangentVector(std::move(horizontal), v.base());
}

PreShape geodesic_point(const PreShape& x, const PreShape& y, double t,
                        const ShapeSpace& space) {
  if (t < 0.0 || t > 1.0) {
    throw InvalidDimension("geodesic parameter must lie in [0, 1]");
  }
  const Alignment align = optimal_position(y, x, space.group);
  const PreShape positioned(align.rotation * y.entries());
  const TangentVector log = sphere_log(x, positioned);
  return sphere_exp(x, TangentVector(t * log.entries(), x));
}

}  // namespace shapestat
