#pragma once

#include "shapestat/means.hpp"

namespace shapestat {

/// Two-point circle distribution: mass 2/3 at angle 0 and 1/3 at angle gamma.
/// All three spherical means have closed forms; the demo computes both routes.
struct CircleMeansResult {
  double gamma = 0;
  double intrinsic_angle = 0;
  double extrinsic_angle = 0;
  double residual_angle = 0;  // the residual mean closer to the extrinsic mean
  double intrinsic_closed_form = 0;
  double extrinsic_closed_form = 0;
  double residual_closed_form = 0;
};

/// Points on S^1 are pre-shapes with m = 1, k = 3.
PreShape circle_point(double angle);
double circle_angle(const PreShape& p);

CircleMeansResult circle_means_demo(double gamma);

}  // namespace shapestat
