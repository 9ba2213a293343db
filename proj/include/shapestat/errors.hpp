#pragma once

#include <stdexcept>
#include <string>

namespace shapestat {

/// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Centered configuration has (numerically) zero size; no pre-shape exists.
class DegenerateConfiguration : public Error {
 public:
  using Error::Error;
};

/// Requested embedding/extraction dimensions are inconsistent.
class InvalidDimension : public Error {
 public:
  using Error::Error;
};

/// Log map requested at (or numerically indistinguishable from) the antipode.
class CutLocus : public Error {
 public:
  using Error::Error;
};

/// Vertical projection is not unique at low-rank pre-shapes.
class SingularStratum : public Error {
 public:
  using Error::Error;
};

/// Mean is undefined (e.g. Euclidean average of the sample vanishes).
class UndefinedMean : public Error {
 public:
  using Error::Error;
};

/// Iterative estimator exhausted its iteration budget.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Orthogonal rank projection leaves the target stratum.
class NotInDomain : public Error {
 public:
  using Error::Error;
};

/// Gram matrix rank does not match the requested reconstruction rank.
class RankMismatch : public Error {
 public:
  using Error::Error;
};

/// Requested comparison between means that numerically coincide.
class MeansCoincide : public Error {
 public:
  using Error::Error;
};

/// Covariance reduction retained no usable component.
class DegenerateCovariance : public Error {
 public:
  using Error::Error;
};

/// Input file could not be parsed; message carries line/field location.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Matrix dimensions in a dataset disagree with its header.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace shapestat
