#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "minklab/lattice.hpp"

namespace minklab {

/// Vector-count cap for all enumerations. Reads MINKLAB_BUDGET, default 10^6.
std::size_t enumeration_budget();

/// All nonzero lattice vectors with norm <= radius (both signs), by
/// Fincke-Pohst descent on the Cholesky factor of an LLL-reduced Gram
/// matrix. Coefficients refer to the input basis. Throws
/// EnumerationBudgetExceeded when more than `budget` vectors qualify.
std::vector<LatticeVector> enumerate_ball(const LatticeBasis& basis, double radius,
                                          std::size_t budget = enumeration_budget());

/// basis * transform, where the first m columns are a basis of the lattice
/// points in the span of `prefix` (coefficient columns). The outer block is
/// reduced modulo that span. With reduce_prefix = false the prefix must be
/// primitive and is kept as the first m columns.
struct AdaptedBasis {
  LatticeBasis basis;
  IntMatrix transform;
};
AdaptedBasis adapt_to_prefix(const LatticeBasis& basis, const IntMatrix& prefix,
                             bool reduce_prefix = true);

/// Lattice vectors v = basis * x outside the span S of the first m columns
/// with |v| <= radius. On S, in Gram-Schmidt coordinates of those columns,
/// each coefficient may differ from the one nearest the projection by at
/// most span_box. Coefficients refer to `basis`; no reduction is applied.
std::vector<LatticeVector> enumerate_outside_span(const LatticeBasis& basis, int m, double radius,
                                                  double span_box = INFINITY,
                                                  std::size_t budget = enumeration_budget());

/// The vectors outside the span of the first m columns whose norm is within
/// `tie` of the shortest such vector, provided that one has norm <= radius.
/// Within one coset of the span, ties are judged on the component inside the
/// span, so thin directions do not flood the result.
std::vector<LatticeVector> shortest_outside_span(const LatticeBasis& basis, int m, double radius,
                                                 double tie,
                                                 std::size_t budget = enumeration_budget());
/// Sort by norm; norms within `tie` of the first member of a run are tied
/// and ordered lexicographically (largest coefficient vector first).
void sort_by_norm(std::vector<LatticeVector>& vectors, double tie = 1e-9);

}  // namespace minklab
