#include "shapestat/circle.hpp"

#include <cmath>

namespace shapestat {

PreShape circle_point(double angle) {
  Eigen::MatrixXd p(1, 2);
  p << std::cos(angle), std::sin(angle);
  return PreShape(std::move(p));
}

double circle_angle(const PreShape& p) {
  if (p.m() != 1 || p.k() != 3) {
    throw InvalidDimension("circle points are 1x2 pre-shapes");
  }
  return std::atan2(p.entries()(0, 1), p.entries()(0, 0));
}

CircleMeansResult circle_means_demo(double gamma) {
  const Sample sample({circle_point(0.0), circle_point(gamma)}, {2.0 / 3.0, 1.0 / 3.0});

  CircleMeansResult res;
  res.gamma = gamma;
  res.intrinsic_angle = circle_angle(spherical_intrinsic_mean(sample).representative);
  res.extrinsic_angle = circle_angle(spherical_extrinsic_mean(sample));

  const ResidualMeanPair pair = spherical_residual_mean(sample);
  const double a_plus = circle_angle(pair.positive);
  const double a_minus = circle_angle(pair.negative);
  res.residual_angle = std::abs(std::remainder(a_plus - res.extrinsic_angle, 2 * M_PI)) <=
                               std::abs(std::remainder(a_minus - res.extrinsic_angle, 2 * M_PI))
                           ? a_plus
                           : a_minus;

  res.intrinsic_closed_form = gamma / 3.0;
  res.extrinsic_closed_form = std::atan(std::sin(gamma) / (2.0 + std::cos(gamma)));
  res.residual_closed_form =
      0.5 * std::atan(std::sin(2.0 * gamma) / (2.0 + std::cos(2.0 * gamma)));
  return res;
}

}  // namespace shapestat
