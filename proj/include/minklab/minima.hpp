#pragma once

#include <optional>
#include <vector>

#include "minklab/lattice.hpp"

namespace minklab {

inline constexpr int kMaxMinimaDim = 8;
inline constexpr double kTieTolerance = 1e-9;

/// Successive minima lambda_1 <= ... <= lambda_d and linearly independent
/// lattice vectors attaining them.
struct MinimaProfile {
  std::vector<double> values;
  std::vector<LatticeVector> attaining;
};

MinimaProfile successive_minima(const LatticeBasis& basis);

/// Testing oracle: exhaustive scan of the coefficient box [-bound, bound]^d.
MinimaProfile brute_force_minima(const LatticeBasis& basis, int coeff_bound);

/// A basis whose j-th vector has norm lambda_j, if one exists.
std::optional<std::vector<LatticeVector>> minima_attaining_basis_search(
    const LatticeBasis& basis);

nlohmann::json minima_to_json(const MinimaProfile& profile);

}  // namespace minklab
