#pragma once

#include "minklab/lattice.hpp"

namespace minklab {

struct LllResult {
  Matrix reduced;    // reduced = original * transform
  IntMatrix transform;
};

// Internal rebasing only: enumeration radii and orbit renormalization.
LllResult lll_reduce(const Matrix& columns, double delta = 0.99);

}  // namespace minklab
