#pragma once

#include <vector>

#include "minklab/lattice.hpp"
#include "minklab/minima.hpp"

namespace minklab {

/// Orthogonal projection of a lattice onto the complement of its shortest
/// vector.
struct ProjectionStep {
  LatticeVector shortest;
  Matrix projector;          // I - v v^T / |v|^2
  Matrix frame;              // d x (d-1), orthonormal basis of shortest^perp
  IntMatrix completion;      // unimodular, first column = shortest.coeffs
  LatticeBasis projected_basis;  // frame coordinates of the projected completion columns 2..d
};

ProjectionStep project_off_shortest(const LatticeBasis& basis);

/// Basis with |v_1| = lambda_1 and |v_j| within C(d) of lambda_j.
struct QuasiMinimalBasis {
  std::vector<LatticeVector> vectors;
  std::vector<double> ratios;  // |v_j| / lambda_j
};

/// C(d) = (1 + 1/sqrt(3))^d.
double quasi_minimal_constant(int d);

QuasiMinimalBasis quasi_minimal_basis(const LatticeBasis& basis);

/// Greedy Minkowski reduction: b_i is the shortest lattice vector such that
/// b_1..b_i extends to a basis. Ties broken lexicographically.
LatticeBasis minkowski_reduce(const LatticeBasis& basis);

/// (prod lambda_i) / covol.
double minkowski_product_ratio(const LatticeBasis& basis);

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

/// Classical Minkowski window [2^d / (d! V_d), 2^d / V_d].
std::pair<double, double> minkowski_window(int d);

}  // namespace minklab
