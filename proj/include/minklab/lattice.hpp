#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "minklab/errors.hpp"

namespace minklab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// A full-rank lattice in R^d given by d column vectors.
///
/// Construction rejects |det| <= 1e-12 * (product of column norms) and
/// caches |det|.
class LatticeBasis {
 public:
  explicit LatticeBasis(Matrix columns);

  int dim() const { return static_cast<int>(columns_.cols()); }
  const Matrix& columns() const { return columns_; }
  Vector column(int j) const { return columns_.col(j); }
  double covolume() const { return covolume_; }

  Vector embed(const IntVector& coeffs) const;

  static LatticeBasis identity(int d);

 private:
  Matrix columns_;
  double covolume_;
};

/// Symmetric positive-definite matrix of inner products <b_i, b_j>.
struct GramMatrix {
  Matrix entries;

  int dim() const { return static_cast<int>(entries.rows()); }
};

/// A lattice point: integer coordinates in a basis plus its embedding.
struct LatticeVector {
  IntVector coeffs;
  Vector embedding;
  double norm = 0.0;

  static LatticeVector from_coeffs(const LatticeBasis& basis, IntVector coeffs);
};

double rank_tolerance(const Matrix& columns);

GramMatrix gram(const LatticeBasis& basis);

double covolume(const LatticeBasis& basis);

/// Inverse-transpose basis: <b_i, b*_j> = delta_ij.
LatticeBasis dual(const LatticeBasis& basis);

/// Largest singular value.
double operator_norm(const Matrix& m);

/// True iff every entry is within 1e-6 of an integer and the rounded matrix
/// has determinant +-1.
bool is_unimodular_integer_matrix(const Matrix& m);

/// Lattice equality: B1^{-1} B2 is a unimodular integer matrix.
bool same_lattice(const LatticeBasis& a, const LatticeBasis& b);

IntMatrix round_to_integer(const Matrix& m);

// Basis I/O: {"dim": d, "columns": [[...], ...]}, one inner array per column.
nlohmann::json basis_to_json(const LatticeBasis& basis);
LatticeBasis basis_from_json(const nlohmann::json& j);
LatticeBasis load_basis(const std::string& path);

nlohmann::json int_vector_to_json(const IntVector& v);

}  // namespace minklab
