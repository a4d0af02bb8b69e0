#include "minklab/lll.hpp"

#include <cmath>

namespace minklab {

namespace {

// Gram-Schmidt coefficients mu and squared norms of b*_i.
void gram_schmidt(const Matrix& b, Matrix& mu, Vector& bstar_sq) {
  const int d = static_cast<int>(b.cols());
  Matrix bstar = b;
  mu.setIdentity(d, d);
  bstar_sq.resize(d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < i; ++j) {
      mu(i, j) = b.col(i).dot(bstar.col(j)) / bstar_sq(j);
      bstar.col(i) -= mu(i, j) * bstar.col(j);
    }
    bstar_sq(i) = bstar.col(i).squaredNorm();
  }
}

}  // namespace

LllResult lll_reduce(const Matrix& columns, double delta) {
  const int d = static_cast<int>(columns.cols());
  Matrix b = columns;
  IntMatrix u = IntMatrix::Identity(d, d);
  Matrix mu;
  Vector bstar_sq;
  gram_schmidt(b, mu, bstar_sq);

  int k = 1;
  long guard = 0;
  while (k < d) {
    for (int j = k - 1; j >= 0; --j) {
      const double q = std::round(mu(k, j));
      if (q != 0.0) {
        b.col(k) -= q * b.col(j);
        u.col(k) -= static_cast<std::int64_t>(q) * u.col(j);
        for (int l = 0; l <= j; ++l) mu(k, l) -= q * (l == j ? 1.0 : mu(j, l));
      }
    }
    if (bstar_sq(k) >= (delta - mu(k, k - 1) * mu(k, k - 1)) * bstar_sq(k - 1)) {
      ++k;
    } else {
      b.col(k).swap(b.col(k - 1));
      u.col(k).swap(u.col(k - 1));
      gram_schmidt(b, mu, bstar_sq);
      k = std::max(k - 1, 1);
    }
    if (++guard > 100000) break;
  }
  // Recompute once more so accumulated mu drift cannot leave the basis
  // unreduced in size.
  gram_schmidt(b, mu, bstar_sq);
  for (int k2 = 1; k2 < d; ++k2) {
    for (int j = k2 - 1; j >= 0; --j) {
      const double q = std::round(mu(k2, j));
      if (q != 0.0) {
        b.col(k2) -= q * b.col(j);
        u.col(k2) -= static_cast<std::int64_t>(q) * u.col(j);
        for (int l = 0; l <= j; ++l) mu(k2, l) -= q * (l == j ? 1.0 : mu(j, l));
      }
    }
  }
  return {std::move(b), std::move(u)};
}

}  // namespace minklab
