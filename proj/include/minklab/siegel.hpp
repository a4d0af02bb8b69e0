#pragma once

#include <cstdint>
#include <vector>

#include "minklab/haar.hpp"
#include "minklab/lattice.hpp"

namespace minklab {

/// Ordered k-tuple of lattice vectors extendable to a basis.
struct PrimitiveTuple {
  std::vector<LatticeVector> vectors;

  int order() const { return static_cast<int>(vectors.size()); }
};

/// Every ordered primitive k-tuple inside the ball of the given radius.
/// Sign and permutation variants are distinct tuples. 1 <= k < d <= 5.
std::vector<PrimitiveTuple> enumerate_primitive_tuples(const LatticeBasis& basis, int k,
                                                       double radius);

/// Siegel transform of the indicator of B(0, radius)^k.
long f_hat_k(const LatticeBasis& basis, int k, double radius);

/// c_{d,k} * (V_d radius^d)^k.
double siegel_right_side(int d, int k, double radius);

struct SiegelCheck {
  int dim = 0;
  int k = 0;
  double radius = 0.0;
  double left = 0.0;
  double right = 0.0;
  double standard_error = 0.0;
  double z = 0.0;
  std::uint64_t seed = 0;
  long sample_count = 0;
  SamplerKind sampler = SamplerKind::siegel;

  nlohmann::json to_json() const;
};

SiegelCheck siegel_mc_check(int d, int k, double radius, int count, std::uint64_t seed,
                            SamplerKind sampler = SamplerKind::siegel, int jobs = 1);

}  // namespace minklab
