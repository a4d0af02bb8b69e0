#pragma once

#include <cmath>
#include <random>

#include "minklab/lattice.hpp"

namespace minklab::testing {

// Entries uniform in [-2, 2], rejected until the condition number is < 50.
// With unimodular = true the basis is rescaled to determinant +1.
inline LatticeBasis random_fixture(int d, std::mt19937_64& rng, bool unimodular = false) {
  std::uniform_real_distribution<double> entry(-2.0, 2.0);
  while (true) {
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = entry(rng);
    const Eigen::JacobiSVD<Matrix> svd(m);
    const Vector s = svd.singularValues();
    if (!(s(d - 1) > 0.0) || s(0) / s(d - 1) >= 50.0) continue;
    if (unimodular) {
      double det = m.determinant();
      if (det < 0.0) {
        m.col(0) = -m.col(0);
        det = -det;
      }
      m /= std::pow(det, 1.0 / d);
    }
    return LatticeBasis(m);
  }
}

inline LatticeBasis z5plus() {
  Matrix m = Matrix::Zero(5, 5);
  for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
  m.col(4).setConstant(0.5);
  return LatticeBasis(m);
}

inline LatticeBasis hexagonal() {
  Matrix m(2, 2);
  m << 1.0, 0.5, 0.0, std::sqrt(3.0) / 2.0;
  return LatticeBasis(m);
}

inline Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace minklab::testing
