// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <initializer_list>

#include "pindex/numkernel.hpp"

namespace testing {

inline pindex::ComplexDense mat(std::initializer_list<std::initializer_list<pindex::Complex>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.begin()->size());
  pindex::ComplexDense m(r, c);
  Eigen::Index i = 0;
  for (const auto &row : rows) {
    Eigen::Index j = 0;
    for (const auto &v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline pindex::ComplexDense diag(std::initializer_list<double> d) {
  pindex::ComplexDense m = pindex::ComplexDense::Zero(d.size(), d.size());
  Eigen::Index i = 0;
  for (double v : d) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

inline bool close(double a, double b, double rel = 1e-12, double abs = 1e-14) {
  return std::abs(a - b) <= abs + rel * std::abs(b);
}

inline double max_diff(const pindex::ComplexDense &a, const pindex::ComplexDense &b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testing
