#include "shapestat/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shapestat/matrix_utils.hpp"

namespace shapestat {

TangentSample tangent_coordinates(const Sample& sample, const PreShape& base,
                                  TangentKind kind, const ShapeSpace& space) {
  if (sample.points.front().m() != base.m() || sample.k() != base.k()) {
    throw InvalidDimension("sample and base dimensions differ");
  }
  const int n = sample.size();
  const int d = base.m() * (base.k() - 1);
  Eigen::MatrixXd coords(n, d);
  for (int i = 0; i < n; ++i) {
    const Alignment al = optimal_position(sample.points[i], base, space.group);
    const Eigen::MatrixXd positioned = al.rotation * sample.points[i].entries();
    const double cos_a = al.inner_product;
    Eigen::MatrixXd coord = positioned - cos_a * base.entries();
    if (kind == TangentKind::IntrinsicCoords) {
      if (cos_a < -1.0 + 1e-12) {
        throw CutLocus("intrinsic coordinates undefined at the antipode");
      }
      const double alpha = std::acos(cos_a);
      const double factor = alpha < 1e-6 ? 1.0 + alpha * alpha / 6.0 : alpha / std::sin(alpha);
      coord *= factor;
    }
    coords.row(i) = flatten_rowmajor(coord).transpose();
  }
  return TangentSample{std::move(coords), base, kind, d};
}

TestReport hotelling_two_sample(const TangentSample& a, const TangentSample& b, double level,
                                int max_components) {
  if (a.kind != b.kind) {
    throw InvalidDimension("tangent samples use different coordinate kinds");
  }
  if (a.coordinates.cols() != b.coordinates.cols()) {
    throw InvalidDimension("tangent samples have different raw dimensions");
  }
  if ((a.base.entries() - b.base.entries()).norm() > 1e-10) {
    throw InvalidDimension("tangent samples are based at different points");
  }
  return detail::hotelling_from_coordinates(a.coordinates, b.coordinates, level,
                                            max_components);
}

namespace detail {

namespace {

// Lentz's algorithm for the continued fraction of the incomplete beta.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) {
      return h;
    }
  }
  throw Error("incomplete beta continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (a <= 0 || b <= 0) {
    throw InvalidDimension("incomplete beta parameters must be positive");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_upper_tail(double f, int d1, int d2) {
  if (f <= 0) return 1.0;
  const double x = d2 / (d2 + d1 * f);
  return regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, x);
}

TestReport hotelling_from_coordinates(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                      double level, int max_components) {
  const int n1 = static_cast<int>(a.rows());
  const int n2 = static_cast<int>(b.rows());
  const int n = n1 + n2;
  if (n1 < 2 || n2 < 2) {
    throw DegenerateCovariance("each sample needs at least two observations");
  }
  if (max_components < 0) {
    max_components = n - 3;
  }

  Eigen::MatrixXd stacked(n, a.cols());
  stacked.topRows(n1) = a;
  stacked.bottomRows(n2) = b;
  const Eigen::RowVectorXd grand_mean = stacked.colwise().mean();
  const Eigen::MatrixXd centered = stacked.rowwise() - grand_mean;

  // Principal directions of the pooled cloud; eigenvalues are squared
  // singular values up to the 1/(n-1) factor, which cancels in the cutoff.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) * sv(0) : 0.0;
  int significant = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) * sv(i) > 1e-10 * top) {
      ++significant;
    }
  }
  // Retained dimension stays strictly below n1+n2-2 so the F statistic keeps
  // a positive denominator degree of freedom.
  const int d = std::min({max_components, n - 3, significant});
  if (d <= 0) {
    throw DegenerateCovariance("no usable component after reduction");
  }
  const Eigen::MatrixXd directions = svd.matrixV().leftCols(d);

  const Eigen::MatrixXd za = (a.rowwise() - grand_mean) * directions;
  const Eigen::MatrixXd zb = (b.rowwise() - grand_mean) * directions;
  const Eigen::RowVectorXd mean_a = za.colwise().mean();
  const Eigen::RowVectorXd mean_b = zb.colwise().mean();
  const Eigen::VectorXd delta = (mean_a - mean_b).transpose();

  Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(d, d);
  {
    const Eigen::MatrixXd ca = za.rowwise() - mean_a;
    const Eigen::MatrixXd cb = zb.rowwise() - mean_b;
    pooled = (ca.transpose() * ca + cb.transpose() * cb) / static_cast<double>(n - 2);
  }
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(pooled);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw DegenerateCovariance("pooled covariance is not positive definite");
  }
  const double t2 = (static_cast<double>(n1) * n2 / n) * delta.dot(ldlt.solve(delta));
  if (!std::isfinite(t2) || t2 < 0) {
    throw DegenerateCovariance("Hotelling statistic is not finite");
  }

  TestReport report;
  report.statistic = t2;
  report.dof = {d, n - d - 1};
  report.f_statistic = t2 * (n - d - 1) / (static_cast<double>(d) * (n - 2));
  report.p_value = f_upper_tail(report.f_statistic, report.dof.first, report.dof.second);
  report.level = level;
  report.reject = report.p_value < level;
  return report;
}

}  // namespace detail

}  // namespace shapestat
