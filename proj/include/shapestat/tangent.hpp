#pragma once

#include <utility>

#include <Eigen/Dense>

#include "shapestat/means.hpp"

namespace shapestat {

enum class TangentKind { IntrinsicCoords, ResidualCoords };

/// Flattened tangent-space coordinates of a sample at a base pre-shape,
/// one row per observation (row-major / axis-major flattening).
struct TangentSample {
  Eigen::MatrixXd coordinates;  // n x m(k-1)
  PreShape base;
  TangentKind kind;
  int reduced_dimension = 0;
};

struct TestReport {
  double statistic = 0;    // Hotelling T^2
  double f_statistic = 0;
  std::pair<int, int> dof{0, 0};
  double p_value = 1;
  bool reject = false;
  double level = 0.05;
};

/// Optimally positions every observation to the base and takes residual
/// (x - <x,p>p) or intrinsic ((alpha/sin alpha)-scaled) coordinates.
TangentSample tangent_coordinates(const Sample& sample, const PreShape& base,
                                  TangentKind kind, const ShapeSpace& space);

/// Two-sample Hotelling T^2 test for equality of means on pooled
/// principal-component-reduced coordinates. max_components < 0 selects the
/// default n1+n2-3.
TestReport hotelling_two_sample(const TangentSample& a, const TangentSample& b,
                                double level = 0.05, int max_components = -1);

namespace detail {

/// Continued-fraction evaluation of the regularized incomplete beta I_x(a,b).
double regularized_incomplete_beta(double a, double b, double x);

/// Upper tail P(F > f) of the F distribution with (d1, d2) degrees of freedom.
double f_upper_tail(double f, int d1, int d2);

/// Test body on raw coordinate matrices (one row per observation).
TestReport hotelling_from_coordinates(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                      double level, int max_components);

}  // namespace detail

}  // namespace shapestat
