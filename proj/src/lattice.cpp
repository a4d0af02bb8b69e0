#include "minklab/lattice.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "minklab/integer.hpp"

namespace minklab {

double rank_tolerance(const Matrix& columns) {
  // Relative to the Hadamard bound, so the test does not depend on scale.
  double product = 1.0;
  for (int j = 0; j < columns.cols(); ++j) product *= columns.col(j).norm();
  return 1e-12 * product;
}

LatticeBasis::LatticeBasis(Matrix columns) : columns_(std::move(columns)), covolume_(0.0) {
  if (columns_.rows() != columns_.cols() || columns_.cols() < 1) {
    throw DegenerateBasis("basis must be a non-empty square matrix");
  }
  if (!columns_.allFinite()) throw DegenerateBasis("basis has non-finite entries");
  covolume_ = std::abs(columns_.determinant());
  if (!(covolume_ > rank_tolerance(columns_))) {
    throw DegenerateBasis("basis columns are linearly dependent (|det| = " +
                          std::to_string(covolume_) + ")");
  }
}

Vector LatticeBasis::embed(const IntVector& coeffs) const {
  return columns_ * coeffs.cast<double>();
}

LatticeBasis LatticeBasis::identity(int d) { return LatticeBasis(Matrix::Identity(d, d)); }

LatticeVector LatticeVector::from_coeffs(const LatticeBasis& basis, IntVector coeffs) {
  LatticeVector v;
  v.embedding = basis.embed(coeffs);
  v.norm = v.embedding.norm();
  v.coeffs = std::move(coeffs);
  return v;
}

GramMatrix gram(const LatticeBasis& basis) {
  Matrix g = basis.columns().transpose() * basis.columns();
  return GramMatrix{0.5 * (g + g.transpose())};
}

double covolume(const LatticeBasis& basis) { return basis.covolume(); }

LatticeBasis dual(const LatticeBasis& basis) {
  return LatticeBasis(basis.columns().inverse().transpose());
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

IntMatrix round_to_integer(const Matrix& m) {
  IntMatrix r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = std::llround(m(i, j));
  return r;
}

bool is_unimodular_integer_matrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.size() == 0 || !m.allFinite()) return false;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (std::abs(m(i, j)) > 9e15) return false;
      if (std::abs(m(i, j) - std::round(m(i, j))) > 1e-6) return false;
    }
  }
  const __int128 det = integer::determinant(round_to_integer(m));
  return det == 1 || det == -1;
}

bool same_lattice(const LatticeBasis& a, const LatticeBasis& b) {
  if (a.dim() != b.dim()) return false;
  const Matrix change = a.columns().partialPivLu().solve(b.columns());
  return is_unimodular_integer_matrix(change);
}

nlohmann::json basis_to_json(const LatticeBasis& basis) {
  nlohmann::json columns = nlohmann::json::array();
  for (int j = 0; j < basis.dim(); ++j) {
    nlohmann::json col = nlohmann::json::array();
    for (int i = 0; i < basis.dim(); ++i) col.push_back(basis.columns()(i, j));
    columns.push_back(std::move(col));
  }
  return {{"dim", basis.dim()}, {"columns", std::move(columns)}};
}

LatticeBasis basis_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("basis: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "dim" && key != "columns") throw SchemaError("basis: unknown key '" + key + "'");
  }
  if (!j.contains("dim") || !j["dim"].is_number_integer()) {
    throw SchemaError("basis: 'dim' must be an integer");
  }
  const int d = j["dim"].get<int>();
  if (d < 1) throw SchemaError("basis: 'dim' must be >= 1");
  if (!j.contains("columns") || !j["columns"].is_array() ||
      static_cast<int>(j["columns"].size()) != d) {
    throw SchemaError("basis: 'columns' must be an array of " + std::to_string(d) + " columns");
  }
  Matrix m(d, d);
  for (int c = 0; c < d; ++c) {
    const auto& col = j["columns"][c];
    if (!col.is_array() || static_cast<int>(col.size()) != d) {
      throw SchemaError("basis: column " + std::to_string(c) + " must have " +
                        std::to_string(d) + " entries");
    }
    for (int r = 0; r < d; ++r) {
      if (!col[r].is_number()) {
        throw SchemaError("basis: column " + std::to_string(c) + " has a non-numeric entry");
      }
      m(r, c) = col[r].get<double>();
    }
  }
  return LatticeBasis(std::move(m));
}

LatticeBasis load_basis(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open basis file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("basis file '" + path + "' is not valid JSON: " + e.what());
  }
  return basis_from_json(j);
}

nlohmann::json int_vector_to_json(const IntVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace minklab
