#include "minklab/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "minklab/integer.hpp"
#include "minklab/lll.hpp"

namespace minklab {

std::size_t enumeration_budget() {
  if (const char* env = std::getenv("MINKLAB_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return 1'000'000;
}

namespace {

// Squared pruning bound for `radius`; the slack only covers rounding, wider
// slack would flood thin fibers.
double pruning_bound(double radius) {
  const double slack = radius * (1.0 + 1e-13) + 1e-12;
  return slack * slack;
}

// Fincke-Pohst descent in zigzag order over coefficient vectors x of `cols`
// with |cols x|^2 <= full, x outside the span of the first m columns, and
// |x_k - center_k| <= span_box on the levels k < m. The visitor may lower
// `full` while the search runs. With fiber_tie >= 0, only the points whose
// component in the span is within fiber_tie of the fiber's closest one are
// visited in each fiber (fixed coordinates m..d-1).
template <class Visit>
void fincke_pohst(const Matrix& cols, int m, double& full, double span_box, Visit&& visit,
                  double fiber_tie = -1.0) {
  const int d = static_cast<int>(cols.cols());
  if (d == 0) return;
  const Matrix g = cols.transpose() * cols;
  const Eigen::LLT<Matrix> llt(0.5 * (g + g.transpose()));
  if (llt.info() != Eigen::Success) throw DegenerateBasis("Gram matrix is not positive definite");
  const Matrix r = llt.matrixU();

  std::vector<double> center(d), partial(d + 1, 0.0), inner(d + 1, 0.0);
  double inner_full = INFINITY;
  std::vector<std::int64_t> x(d, 0), base(d, 0), up(d, 0), down(d, 0);
  std::vector<char> up_open(d), down_open(d), turn(d);

  auto init_level = [&](int k) {
    double s = 0.0;
    for (int j = k + 1; j < d; ++j) s += r(k, j) * static_cast<double>(x[j]);
    center[k] = -s / r(k, k);
    base[k] = static_cast<std::int64_t>(std::llround(center[k]));
    up[k] = 0;
    down[k] = 1;
    up_open[k] = down_open[k] = 1;
    turn[k] = center[k] >= static_cast<double>(base[k]);
    if (k == m - 1) inner_full = INFINITY;
  };
  const double box = span_box * (1.0 + 1e-12);
  // Next admissible value at level k; each direction closes at its first
  // failure since |x_k - center_k| only grows along it.
  auto next = [&](int k) {
    while (up_open[k] || down_open[k]) {
      const bool go_up = down_open[k] ? (up_open[k] && turn[k]) : true;
      turn[k] = !turn[k];
      const std::int64_t cand = go_up ? base[k] + up[k]++ : base[k] - down[k]++;
      const double off = static_cast<double>(cand) - center[k];
      const double diff = r(k, k) * off;
      const double p = partial[k + 1] + diff * diff;
      const double q = k < m ? inner[k + 1] + diff * diff : 0.0;
      if (p > full || (k < m && (std::abs(off) > box || q > inner_full))) {
        (go_up ? up_open[k] : down_open[k]) = 0;
        continue;
      }
      x[k] = cand;
      partial[k] = p;
      inner[k] = q;
      return true;
    }
    return false;
  };
  auto tail_zero = [&](int from) {
    for (int j = from; j < d; ++j)
      if (x[j] != 0) return false;
    return true;
  };

  int k = d - 1;
  init_level(k);
  while (true) {
    if (!next(k)) {
      if (++k >= d) break;
      continue;
    }
    if (k == m && m > 0 && tail_zero(m)) continue;
    if (k > 0) {
      --k;
      init_level(k);
      continue;
    }
    if (tail_zero(std::max(m, 0))) continue;
    visit(x);
    if (fiber_tie >= 0.0 && m > 0) {
      const double tight = std::sqrt(inner[0]) + fiber_tie;
      inner_full = std::min(inner_full, tight * tight * (1.0 + 1e-13) + 1e-24);
    }
  }
}

[[noreturn]] void over_budget(double radius, std::size_t budget) {
  throw EnumerationBudgetExceeded("enumeration of radius " + std::to_string(radius) +
                                  " exceeds budget of " + std::to_string(budget) + " vectors");
}

}  // namespace

std::vector<LatticeVector> enumerate_ball(const LatticeBasis& basis, double radius,
                                          std::size_t budget) {
  std::vector<LatticeVector> out;
  if (!(radius > 0.0)) return out;
  const int d = basis.dim();
  const LllResult red = lll_reduce(basis.columns());
  IntVector local(d);
  double full = pruning_bound(radius);
  fincke_pohst(red.reduced, 0, full, INFINITY, [&](const std::vector<std::int64_t>& x) {
    for (int i = 0; i < d; ++i) local(i) = x[i];
    LatticeVector v = LatticeVector::from_coeffs(basis, red.transform * local);
    if (v.norm <= radius * (1.0 + 1e-12) + 1e-12) {
      if (out.size() >= budget) over_budget(radius, budget);
      out.push_back(std::move(v));
    }
  });
  return out;
}

std::vector<LatticeVector> enumerate_outside_span(const LatticeBasis& basis, int m, double radius,
                                                  double span_box, std::size_t budget) {
  std::vector<LatticeVector> out;
  const int d = basis.dim();
  if (!(radius > 0.0) || m < 0 || m >= d) return out;
  IntVector c(d);
  double full = pruning_bound(radius);
  fincke_pohst(basis.columns(), m, full, span_box, [&](const std::vector<std::int64_t>& x) {
    for (int i = 0; i < d; ++i) c(i) = x[i];
    LatticeVector v = LatticeVector::from_coeffs(basis, c);
    if (v.norm <= radius * (1.0 + 1e-12) + 1e-12) {
      if (out.size() >= budget) over_budget(radius, budget);
      out.push_back(std::move(v));
    }
  });
  return out;
}

std::vector<LatticeVector> shortest_outside_span(const LatticeBasis& basis, int m, double radius,
                                                 double tie, std::size_t budget) {
  std::vector<LatticeVector> out;
  const int d = basis.dim();
  if (!(radius > 0.0) || m < 0 || m >= d) return out;
  double best = radius;
  double full = pruning_bound(best + tie);
  IntVector c(d);
  fincke_pohst(basis.columns(), m, full, INFINITY, [&](const std::vector<std::int64_t>& x) {
    for (int i = 0; i < d; ++i) c(i) = x[i];
    LatticeVector v = LatticeVector::from_coeffs(basis, c);
    if (v.norm > best + tie) return;
    if (v.norm < best) {
      best = v.norm;
      full = pruning_bound(best + tie);
      std::erase_if(out, [&](const LatticeVector& w) { return w.norm > best + tie; });
    }
    if (out.size() >= budget) over_budget(radius, budget);
    out.push_back(std::move(v));
  }, tie);
  return out;
}

AdaptedBasis adapt_to_prefix(const LatticeBasis& basis, const IntMatrix& prefix,
                             bool reduce_prefix) {
  const int d = basis.dim();
  const int m = static_cast<int>(prefix.cols());
  if (m == 0) {
    const LllResult red = lll_reduce(basis.columns());
    return {LatticeBasis(red.reduced), red.transform};
  }
  IntMatrix t = integer::saturate_and_extend(prefix);
  if (!reduce_prefix) {
    std::vector<IntVector> rows;
    for (int c = 0; c < m; ++c) rows.push_back(prefix.col(c));
    if (!integer::is_primitive(rows)) {
      throw std::invalid_argument("adapt_to_prefix: prefix is not primitive");
    }
    // Same span and both unimodular over it, so the prefix itself can lead.
    t.leftCols(m) = prefix;
  }
  if (m == d) return {LatticeBasis(basis.columns() * t.cast<double>()), t};

  IntMatrix block = IntMatrix::Identity(d, d);
  Matrix a = basis.columns() * t.cast<double>();
  Matrix span = a.leftCols(m);
  if (reduce_prefix) {
    const LllResult span_red = lll_reduce(span);
    block.topLeftCorner(m, m) = span_red.transform;
    span = span_red.reduced;
  }
  // Reduce the projections of the outer columns onto S^perp.
  const Eigen::HouseholderQR<Matrix> qr(span);
  const Matrix q = qr.householderQ() * Matrix::Identity(d, m);
  const Matrix rest = a.rightCols(d - m);
  const LllResult rest_red = lll_reduce(rest - q * (q.transpose() * rest));
  block.bottomRightCorner(d - m, d - m) = rest_red.transform;
  t = t * block;
  a = basis.columns() * t.cast<double>();

  // Nearest-plane size reduction of the outer columns against S.
  Matrix star = a.leftCols(m);
  for (int i = 0; i < m; ++i)
    for (int l = 0; l < i; ++l)
      star.col(i) -= star.col(l).dot(a.col(i)) / star.col(l).squaredNorm() * star.col(l);
  IntMatrix shift = IntMatrix::Identity(d, d);
  for (int j = m; j < d; ++j) {
    Vector v = a.col(j);
    for (int i = m - 1; i >= 0; --i) {
      const double c = std::round(star.col(i).dot(v) / star.col(i).squaredNorm());
      v -= c * a.col(i);
      shift(i, j) = -static_cast<std::int64_t>(c);
    }
  }
  t = t * shift;
  return {LatticeBasis(basis.columns() * t.cast<double>()), t};
}

void sort_by_norm(std::vector<LatticeVector>& vectors, double tie) {
  std::sort(vectors.begin(), vectors.end(),
            [](const LatticeVector& a, const LatticeVector& b) { return a.norm < b.norm; });
  auto lex_greater = [](const LatticeVector& a, const LatticeVector& b) {
    return std::lexicographical_compare(b.coeffs.data(), b.coeffs.data() + b.coeffs.size(),
                                        a.coeffs.data(), a.coeffs.data() + a.coeffs.size());
  };
  std::size_t begin = 0;
  while (begin < vectors.size()) {
    std::size_t end = begin + 1;
    while (end < vectors.size() && vectors[end].norm - vectors[begin].norm <= tie) ++end;
    std::sort(vectors.begin() + begin, vectors.begin() + end, lex_greater);
    begin = end;
  }
}

}  // namespace minklab
