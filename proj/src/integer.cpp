#include "minklab/integer.hpp"

#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace minklab::integer {

__int128 determinant(const IntMatrix& m) {
  const int n = static_cast<int>(m.rows());
  if (n != m.cols()) throw std::invalid_argument("determinant: matrix must be square");
  if (n == 0) return 1;
  std::vector<__int128> a(static_cast<std::size_t>(n) * n);
  auto at = [&](int i, int j) -> __int128& { return a[static_cast<std::size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) at(i, j) = m(i, j);

  // Bareiss fraction-free elimination.
  int sign = 1;
  __int128 prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (at(k, k) == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i) {
        if (at(i, k) != 0) {
          swap = i;
          break;
        }
      }
      if (swap < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(swap, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
      }
    }
    prev = at(k, k);
  }
  return sign * at(n - 1, n - 1);
}

int rank(std::span<const IntVector> vectors) {
  if (vectors.empty()) return 0;
  const int rows = static_cast<int>(vectors.size());
  const int cols = static_cast<int>(vectors.front().size());
  std::vector<std::vector<__int128>> a(rows, std::vector<__int128>(cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a[i][j] = vectors[i](j);

  int r = 0;
  __int128 prev = 1;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pivot = -1;
    for (int i = r; i < rows; ++i) {
      if (a[i][c] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(a[r], a[pivot]);
    for (int i = r + 1; i < rows; ++i) {
      for (int j = c + 1; j < cols; ++j) {
        a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) / prev;
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

std::int64_t gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

ExtendedGcd extended_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b;
  std::int64_t old_s = 1, s = 0;
  std::int64_t old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

namespace {

// Visit every strictly increasing index subset of size k from [0, n).
template <class F>
void for_each_subset(int n, int k, F&& f) {
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::int64_t minor_gcd(std::span<const IntVector> rows) {
  const int k = static_cast<int>(rows.size());
  if (k == 0) return 1;
  const int d = static_cast<int>(rows.front().size());
  if (k > d) return 0;
  std::int64_t g = 0;
  IntMatrix sub(k, k);
  for_each_subset(d, k, [&](const std::vector<int>& cols) {
    if (g == 1) return;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) sub(i, j) = rows[i](cols[j]);
    const __int128 det = determinant(sub);
    const __int128 mag = det < 0 ? -det : det;
    if (mag > static_cast<__int128>(INT64_MAX)) {
      throw std::overflow_error("minor_gcd: minor exceeds 64-bit range");
    }
    g = std::gcd(g, static_cast<std::int64_t>(mag));
  });
  return g;
}

bool is_primitive(std::span<const IntVector> rows) { return minor_gcd(rows) == 1; }

IntMatrix complete_to_unimodular(const IntVector& c) {
  const int d = static_cast<int>(c.size());
  // Row operations V reduce c to (+-1, 0, ..., 0); inv tracks V^{-1}, whose
  // first column is then c.
  IntVector x = c;
  IntMatrix inv = IntMatrix::Identity(d, d);
  for (int i = 1; i < d; ++i) {
    if (x(i) == 0) continue;
    const auto [g, p, q] = extended_gcd(x(0), x(i));
    const std::int64_t a = x(0) / g;
    const std::int64_t b = x(i) / g;
    // M = [[p, q], [-b, a]] has det 1 and maps (x0, xi) to (g, 0);
    // M^{-1} = [[a, -q], [b, p]] acts on columns (0, i) of inv.
    for (int r = 0; r < d; ++r) {
      const std::int64_t c0 = inv(r, 0);
      const std::int64_t ci = inv(r, i);
      inv(r, 0) = c0 * a + ci * b;
      inv(r, i) = -c0 * q + ci * p;
    }
    x(0) = g;
    x(i) = 0;
  }
  if (std::llabs(x(0)) != 1) throw std::invalid_argument("complete_to_unimodular: vector is not primitive");
  if (x(0) == -1) inv.col(0) = -inv.col(0);
  return inv;
}

IntMatrix saturate_and_extend(const IntMatrix& prefix) {
  const int d = static_cast<int>(prefix.rows());
  const int m = static_cast<int>(prefix.cols());
  // Row operations V bring prefix to upper triangular form; inv = V^{-1}.
  IntMatrix x = prefix;
  IntMatrix inv = IntMatrix::Identity(d, d);
  for (int j = 0; j < m; ++j) {
    for (int i = j + 1; i < d; ++i) {
      if (x(i, j) == 0) continue;
      const auto [g, p, q] = extended_gcd(x(j, j), x(i, j));
      const std::int64_t a = x(j, j) / g;
      const std::int64_t b = x(i, j) / g;
      for (int c = 0; c < m; ++c) {
        const std::int64_t rj = x(j, c);
        const std::int64_t ri = x(i, c);
        x(j, c) = p * rj + q * ri;
        x(i, c) = -b * rj + a * ri;
      }
      for (int r = 0; r < d; ++r) {
        const std::int64_t c0 = inv(r, j);
        const std::int64_t ci = inv(r, i);
        inv(r, j) = c0 * a + ci * b;
        inv(r, i) = -c0 * q + ci * p;
      }
    }
    if (x(j, j) == 0) throw std::invalid_argument("saturate_and_extend: columns are dependent");
  }
  return inv;
}

}  // namespace minklab::integer
