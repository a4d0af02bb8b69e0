#include "minklab/minima.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "minklab/enumeration.hpp"
#include "minklab/integer.hpp"
#include "minklab/lll.hpp"

namespace minklab {

namespace {

void require_dim(int d, int max_dim, const char* what) {
  if (d > max_dim) {
    throw DimensionTooLarge(std::string(what) + ": dimension " + std::to_string(d) +
                            " exceeds limit " + std::to_string(max_dim));
  }
}

}  // namespace

MinimaProfile successive_minima(const LatticeBasis& basis) {
  const int d = basis.dim();
  require_dim(d, kMaxMinimaDim, "successive_minima");

  // Stage k looks for the shortest vector outside the span of the k vectors
  // already chosen, enumerating only outside that span.
  MinimaProfile profile;
  IntMatrix chosen(d, 0);
  for (int k = 0; k < d; ++k) {
    const AdaptedBasis adapted = adapt_to_prefix(basis, chosen);
    double radius = INFINITY;
    for (int j = k; j < d; ++j) radius = std::min(radius, adapted.basis.column(j).norm());

    std::vector<LatticeVector> vectors;
    for (auto& v : shortest_outside_span(adapted.basis, k, radius, kTieTolerance)) {
      vectors.push_back(LatticeVector::from_coeffs(basis, adapted.transform * v.coeffs));
    }
    if (vectors.empty()) {
      throw DegenerateBasis("successive_minima: enumeration found no independent vector");
    }
    sort_by_norm(vectors, kTieTolerance);
    chosen.conservativeResize(d, k + 1);
    chosen.col(k) = vectors.front().coeffs;
    profile.values.push_back(vectors.front().norm);
    profile.attaining.push_back(std::move(vectors.front()));
  }
  return profile;
}

MinimaProfile brute_force_minima(const LatticeBasis& basis, int coeff_bound) {
  const int d = basis.dim();
  require_dim(d, 5, "brute_force_minima");
  if (coeff_bound < 1 || coeff_bound > 6) {
    throw InvalidRange("brute_force_minima: coefficient bound must lie in [1, 6]");
  }

  struct Candidate {
    double norm;
    IntVector coeffs;
  };
  std::vector<Candidate> all;
  IntVector c = IntVector::Constant(d, -coeff_bound);
  while (true) {
    if (!c.isZero()) all.push_back({basis.embed(c).norm(), c});
    int i = 0;
    while (i < d && c(i) == coeff_bound) c(i++) = -coeff_bound;
    if (i == d) break;
    ++c(i);
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Candidate& a, const Candidate& b) { return a.norm < b.norm; });

  MinimaProfile profile;
  Matrix span(d, 0);
  for (const auto& cand : all) {
    Matrix trial(d, span.cols() + 1);
    trial << span, basis.embed(cand.coeffs);
    Eigen::FullPivLU<Matrix> lu(trial);
    lu.setThreshold(1e-10);
    if (lu.rank() == trial.cols()) {
      span = std::move(trial);
      profile.values.push_back(cand.norm);
      profile.attaining.push_back(LatticeVector::from_coeffs(basis, cand.coeffs));
      if (span.cols() == d) break;
    }
  }
  return profile;
}

std::optional<std::vector<LatticeVector>> minima_attaining_basis_search(
    const LatticeBasis& basis) {
  const int d = basis.dim();
  require_dim(d, 5, "minima_attaining_basis_search");
  constexpr std::size_t kMaxCandidatesPerLevel = 512;

  const MinimaProfile profile = successive_minima(basis);
  std::vector<LatticeVector> vectors = enumerate_ball(basis, profile.values.back() + kTieTolerance);
  sort_by_norm(vectors, kTieTolerance);

  std::vector<std::vector<const LatticeVector*>> levels(d);
  for (int j = 0; j < d; ++j) {
    for (const auto& v : vectors) {
      if (std::abs(v.norm - profile.values[j]) <= kTieTolerance &&
          levels[j].size() < kMaxCandidatesPerLevel) {
        levels[j].push_back(&v);
      }
    }
  }

  std::vector<IntVector> chosen;
  std::vector<const LatticeVector*> picked;
  std::function<bool(int)> search = [&](int level) -> bool {
    if (level == d) {
      IntMatrix m(d, d);
      for (int j = 0; j < d; ++j) m.col(j) = chosen[j];
      const __int128 det = integer::determinant(m);
      return det == 1 || det == -1;
    }
    for (const LatticeVector* v : levels[level]) {
      chosen.push_back(v->coeffs);
      picked.push_back(v);
      if (integer::rank(chosen) == level + 1 && search(level + 1)) return true;
      chosen.pop_back();
      picked.pop_back();
    }
    return false;
  };
  if (!search(0)) return std::nullopt;

  std::vector<LatticeVector> out;
  for (const LatticeVector* v : picked) out.push_back(*v);
  return out;
}

nlohmann::json minima_to_json(const MinimaProfile& profile) {
  nlohmann::json attaining = nlohmann::json::array();
  for (const auto& v : profile.attaining) attaining.push_back(int_vector_to_json(v.coeffs));
  return {{"values", profile.values}, {"attaining", std::move(attaining)}};
}

}  // namespace minklab
