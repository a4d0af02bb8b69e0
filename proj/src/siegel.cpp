#include "minklab/siegel.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "minklab/ensemble.hpp"
#include "minklab/enumeration.hpp"
#include "minklab/integer.hpp"
#include "minklab/reduction.hpp"
#include "minklab/stats.hpp"

namespace minklab {

namespace {

void require_tuple_range(int d, int k) {
  if (d > 5) {
    throw DimensionTooLarge("primitive tuples: dimension " + std::to_string(d) +
                            " exceeds limit 5");
  }
  if (k < 1 || k >= d) {
    throw InvalidRange("primitive tuples: need 1 <= k < d (got k=" + std::to_string(k) +
                       ", d=" + std::to_string(d) + ")");
  }
}

// Depth-first walk over ordered primitive k-tuples drawn from `vectors`.
// Every prefix of a primitive tuple is primitive, so the test prunes early.
void walk_tuples(const std::vector<LatticeVector>& vectors, int k,
                 const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<IntVector> rows;
  std::vector<int> picked;
  std::function<void()> descend = [&] {
    if (static_cast<int>(picked.size()) == k) {
      visit(picked);
      return;
    }
    for (int idx = 0; idx < static_cast<int>(vectors.size()); ++idx) {
      rows.push_back(vectors[idx].coeffs);
      if (integer::is_primitive(rows)) {
        picked.push_back(idx);
        descend();
        picked.pop_back();
      }
      rows.pop_back();
    }
  };
  descend();
}

}  // namespace

std::vector<PrimitiveTuple> enumerate_primitive_tuples(const LatticeBasis& basis, int k,
                                                       double radius) {
  require_tuple_range(basis.dim(), k);
  const std::size_t budget = enumeration_budget();
  std::vector<LatticeVector> vectors = enumerate_ball(basis, radius, budget);
  sort_by_norm(vectors);
  std::vector<PrimitiveTuple> out;
  walk_tuples(vectors, k, [&](const std::vector<int>& picked) {
    if (out.size() >= budget) {
      throw EnumerationBudgetExceeded("primitive tuple count exceeds budget of " +
                                      std::to_string(budget));
    }
    PrimitiveTuple tuple;
    for (int idx : picked) tuple.vectors.push_back(vectors[idx]);
    out.push_back(std::move(tuple));
  });
  return out;
}

long f_hat_k(const LatticeBasis& basis, int k, double radius) {
  require_tuple_range(basis.dim(), k);
  const std::vector<LatticeVector> vectors = enumerate_ball(basis, radius);
  if (k == 1) {
    long count = 0;
    for (const auto& v : vectors) {
      std::int64_t g = 0;
      for (int i = 0; i < v.coeffs.size(); ++i) g = integer::gcd(g, v.coeffs(i));
      if (g == 1) ++count;
    }
    return count;
  }
  long count = 0;
  walk_tuples(vectors, k, [&](const std::vector<int>&) { ++count; });
  return count;
}

double siegel_right_side(int d, int k, double radius) {
  const VolumeConstants c = volume_constants(d, k);
  return c.c_dk * std::pow(unit_ball_volume(d) * std::pow(radius, d), k);
}

nlohmann::json SiegelCheck::to_json() const {
  return {{"dim", dim},         {"k", k},
          {"radius", radius},   {"left", left},
          {"right", right},     {"stderr", standard_error},
          {"z", z},             {"ratio", right > 0.0 ? left / right : 0.0},
          {"seed", seed},       {"sample_count", sample_count},
          {"sampler", to_string(sampler)}};
}

SiegelCheck siegel_mc_check(int d, int k, double radius, int count, std::uint64_t seed,
                            SamplerKind sampler, int jobs) {
  if (d < 2 || d > 3) throw InvalidRange("siegel_mc_check: dimension must be 2 or 3");
  require_tuple_range(d, k);
  if (!(radius > 0.0)) throw InvalidRange("siegel_mc_check: radius must be positive");
  if (count < 1) throw InvalidRange("siegel_mc_check: count must be at least 1");

  const SamplerConfig config{sampler, d, {}, {}};
  const int blocks = block_count(count);
  std::vector<WeightedMean> partial(blocks);
  parallel_for(blocks, jobs, [&](int b) {
    for (const auto& s : generate_block(config, seed, b, block_length(count, b))) {
      partial[b].add(s.weight, static_cast<double>(f_hat_k(s.basis, k, radius)));
    }
  });
  WeightedMean total;
  for (const auto& p : partial) total.merge(p);

  SiegelCheck out;
  out.dim = d;
  out.k = k;
  out.radius = radius;
  out.left = total.mean();
  out.right = siegel_right_side(d, k, radius);
  out.standard_error = total.standard_error();
  out.z = out.standard_error > 0.0 ? (out.left - out.right) / out.standard_error : 0.0;
  out.seed = seed;
  out.sample_count = count;
  out.sampler = sampler;
  return out;
}

}  // namespace minklab
