#include "minklab/reduction.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "minklab/enumeration.hpp"
#include "minklab/integer.hpp"

namespace minklab {

ProjectionStep project_off_shortest(const LatticeBasis& basis) {
  const int d = basis.dim();
  if (d < 2) throw InvalidRange("project_off_shortest: dimension must be at least 2");

  MinimaProfile profile = successive_minima(basis);
  LatticeVector shortest = std::move(profile.attaining.front());
  const IntMatrix completion = integer::complete_to_unimodular(shortest.coeffs);
  const Matrix completed = basis.columns() * completion.cast<double>();

  const Vector unit = shortest.embedding / shortest.norm;
  const Eigen::HouseholderQR<Matrix> qr(unit);
  const Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  Matrix frame = q.rightCols(d - 1);

  Matrix projected = frame.transpose() * completed.rightCols(d - 1);
  return ProjectionStep{std::move(shortest), Matrix::Identity(d, d) - unit * unit.transpose(),
                        std::move(frame), completion, LatticeBasis(std::move(projected))};
}

double quasi_minimal_constant(int d) {
  return std::pow(1.0 + 1.0 / std::sqrt(3.0), static_cast<double>(d));
}

namespace {

// Coefficient matrix (columns v_1..v_d in terms of `basis`) of the recursive
// projection-and-lift construction.
IntMatrix quasi_minimal_coeffs(const LatticeBasis& basis) {
  const int d = basis.dim();
  if (d == 1) return IntMatrix::Identity(1, 1);

  const ProjectionStep step = project_off_shortest(basis);
  const IntMatrix sub = quasi_minimal_coeffs(step.projected_basis);
  const IntVector& first = step.shortest.coeffs;
  const double first_sq = step.shortest.norm * step.shortest.norm;

  IntMatrix coeffs(d, d);
  coeffs.col(0) = first;
  for (int j = 1; j < d; ++j) {
    IntVector lift = step.completion.rightCols(d - 1) * sub.col(j - 1);
    const double t = basis.embed(lift).dot(step.shortest.embedding) / first_sq;
    // Shift the v_1-component into [-1/2, 1/2).
    lift -= static_cast<std::int64_t>(std::floor(t + 0.5)) * first;
    coeffs.col(j) = lift;
  }
  return coeffs;
}

}  // namespace

QuasiMinimalBasis quasi_minimal_basis(const LatticeBasis& basis) {
  const int d = basis.dim();
  if (d > kMaxMinimaDim) {
    throw DimensionTooLarge("quasi_minimal_basis: dimension " + std::to_string(d) +
                            " exceeds limit " + std::to_string(kMaxMinimaDim));
  }
  const IntMatrix coeffs = quasi_minimal_coeffs(basis);
  const __int128 det = integer::determinant(coeffs);
  if (det != 1 && det != -1) throw DegenerateBasis("quasi_minimal_basis: lift is not a basis");

  const MinimaProfile profile = successive_minima(basis);
  QuasiMinimalBasis out;
  for (int j = 0; j < d; ++j) {
    out.vectors.push_back(LatticeVector::from_coeffs(basis, coeffs.col(j)));
    out.ratios.push_back(out.vectors.back().norm / profile.values[j]);
  }
  return out;
}

LatticeBasis minkowski_reduce(const LatticeBasis& basis) {
  const int d = basis.dim();
  if (d > 5) {
    throw DimensionTooLarge("minkowski_reduce: dimension " + std::to_string(d) +
                            " exceeds limit 5");
  }
  const MinimaProfile profile = successive_minima(basis);
  // Minkowski-reduced vectors satisfy |b_i| <= sqrt(5/4) lambda_i for d <= 5.
  double radius = 1.2 * profile.values.back();
  for (int attempt = 0; attempt < 16; ++attempt, radius *= 2.0) {
    std::vector<LatticeVector> vectors = enumerate_ball(basis, radius);
    sort_by_norm(vectors, kTieTolerance);

    std::vector<IntVector> chosen;
    for (int i = 0; i < d; ++i) {
      bool found = false;
      for (const auto& v : vectors) {
        chosen.push_back(v.coeffs);
        if (integer::is_primitive(chosen)) {
          found = true;
          break;
        }
        chosen.pop_back();
      }
      if (!found) break;
    }
    if (static_cast<int>(chosen.size()) == d) {
      IntMatrix c(d, d);
      for (int j = 0; j < d; ++j) c.col(j) = chosen[j];
      return LatticeBasis(basis.columns() * c.cast<double>());
    }
  }
  throw DegenerateBasis("minkowski_reduce: greedy construction did not complete");
}

double minkowski_product_ratio(const LatticeBasis& basis) {
  const MinimaProfile profile = successive_minima(basis);
  double product = 1.0;
  for (double v : profile.values) product *= v;
  return product / basis.covolume();
}

double unit_ball_volume(int d) {
  const double half = 0.5 * d;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

std::pair<double, double> minkowski_window(int d) {
  const double upper = std::pow(2.0, d) / unit_ball_volume(d);
  return {upper / std::tgamma(d + 1.0), upper};
}

}  // namespace minklab
