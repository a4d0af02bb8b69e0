#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "minklab/lattice.hpp"

// Exact integer linear algebra on small coefficient matrices.
namespace minklab::integer {

/// Determinant of a square integer matrix (fraction-free elimination in
/// 128-bit arithmetic).
__int128 determinant(const IntMatrix& m);

/// Rank of the set of integer vectors, computed exactly.
int rank(std::span<const IntVector> vectors);

std::int64_t gcd(std::int64_t a, std::int64_t b);

/// a*x + b*y = g = gcd(a, b) >= 0.
struct ExtendedGcd {
  std::int64_t g, x, y;
};
ExtendedGcd extended_gcd(std::int64_t a, std::int64_t b);

/// gcd of all k x k minors of the k x d matrix whose rows are `rows`.
/// Zero iff the rows are linearly dependent.
std::int64_t minor_gcd(std::span<const IntVector> rows);

/// Rows extend to a basis of Z^d iff all elementary divisors are 1.
bool is_primitive(std::span<const IntVector> rows);

/// Unimodular integer matrix whose first column is the primitive vector c.
IntMatrix complete_to_unimodular(const IntVector& c);

/// Unimodular integer matrix whose first m columns are a basis of the
/// saturation of the span of the m independent columns of `prefix`.
IntMatrix saturate_and_extend(const IntMatrix& prefix);

}  // namespace minklab::integer
