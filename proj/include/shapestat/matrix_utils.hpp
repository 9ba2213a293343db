#pragma once

#include <Eigen/Dense>

namespace shapestat {

/// Flattens a matrix row-major (axis-major for landmark matrices).
inline Eigen::VectorXd flatten_rowmajor(const Eigen::MatrixXd& m) {
  Eigen::VectorXd v(m.size());
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      v(idx++) = m(i, j);
    }
  }
  return v;
}

inline Eigen::MatrixXd unflatten_rowmajor(const Eigen::VectorXd& v, Eigen::Index rows,
                                          Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = v(idx++);
    }
  }
  return m;
}

}  // namespace shapestat
