#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "minklab/lattice.hpp"

namespace minklab {

/// g = k * diag(a) * n with k in SO(d), prod a = 1, n unit upper triangular.
struct IwasawaCoords {
  Matrix k;
  Vector a;
  Matrix n;

  Matrix reconstruct() const;
};

IwasawaCoords iwasawa_decompose(const Matrix& g);

/// rho(a) = prod_{i<j} a_i / a_j.
double haar_density(const Vector& a);

/// Sigma_{t,u} = K A_t N_u with A_t = {a_i / a_{i+1} <= t}, N_u = {|n_ij| <= u}.
struct SiegelSet {
  double t = 2.0 / std::sqrt(3.0);
  double u = 0.5;

  /// t >= 2/sqrt(3) and u >= 1/2.
  bool covers_fundamental_domain() const;
  bool contains(const IwasawaCoords& coords, double rel_tol = 1e-12) const;
};

struct VolumeConstants {
  double vol_k;  // prod_{i=1}^{d-1} pi^{i/2} / Gamma(i/2 + 1)
  double vol_x;  // zeta(2) ... zeta(d)
  double c_dk;   // 1 / (zeta(d) ... zeta(d-k+1))
};

/// Riemann zeta at an integer s >= 2 (Euler-Maclaurin summation, ~1e-15).
double riemann_zeta(int s);

VolumeConstants volume_constants(int d, int k);

enum class SamplerKind { exact_d2, siegel };
enum class WeightKind { exact, importance };

std::string to_string(SamplerKind kind);
SamplerKind sampler_from_string(const std::string& name);

struct WeightedSample {
  LatticeBasis basis;
  double weight = 1.0;
  std::vector<double> minima;  // filled when the sampler already computed them
};

struct SamplerConfig {
  SamplerKind kind = SamplerKind::siegel;
  int dim = 2;
  SiegelSet sset{};
  // Optional proposal rates c_m in (0, m(d-m)] for the simple roots (Siegel
  // sampler only). Smaller rates push samples into the cusp; the weights
  // absorb the change. Empty means Haar rates.
  std::vector<double> tilt;
};

/// Bounds of the truncated A-region used by the Siegel sampler.
struct Truncation {
  std::vector<double> root_min;  // lower bound of log(a_m / a_{m+1})
  std::vector<double> root_max;  // = log t
  double a1_min = 0.0;
  double a1_max = 0.0;
  double tail_mass = 0.0;        // Haar mass cut off, relative
};

Truncation siegel_truncation(int d, const SiegelSet& sset);

/// Reproducible batch of Haar-distributed unimodular lattices.
struct SampleEnsemble {
  std::uint64_t seed = 0;
  int dim = 0;
  SamplerKind sampler = SamplerKind::siegel;
  WeightKind weight_kind = WeightKind::exact;
  SiegelSet sset{};
  std::vector<double> tilt;
  std::vector<WeightedSample> samples;
  nlohmann::json header() const;
};

/// Exact Haar sampler for d = 2 through the modular fundamental domain.
SampleEnsemble sample_exact_d2(int count, std::uint64_t seed, int jobs = 1);

/// Importance sampler on the Siegel set, weight 1 / multiplicity. d in {2,3}.
SampleEnsemble sample_siegel(int d, int count, std::uint64_t seed,
                             const SiegelSet& sset = {}, int jobs = 1);

SampleEnsemble sample_ensemble(const SamplerConfig& config, int count, std::uint64_t seed,
                               int jobs = 1);

/// Number of bases of the lattice, up to the center of SL(d,Z), whose
/// Iwasawa a- and n-parts lie in the Siegel set.
int count_siegel_translates(const LatticeBasis& basis, const SiegelSet& sset);
int count_siegel_translates(const LatticeBasis& basis, const std::vector<double>& minima,
                            const SiegelSet& sset);

inline constexpr double kExactYMax = 1e6;

/// Uniform rotation in SO(d).
Matrix random_rotation(int d, std::mt19937_64& rng);

/// One unweighted Haar-random unimodular lattice (d in {2,3}); the Siegel
/// draw is accepted with probability 1 / multiplicity.
LatticeBasis draw_haar_lattice(int d, std::mt19937_64& rng);

// Per-block generation; the ensemble for `count` samples is the
// concatenation of blocks 0, 1, ... of size kBlockSize.
std::vector<WeightedSample> generate_block(const SamplerConfig& config, std::uint64_t seed,
                                           int block, int size);

}  // namespace minklab
