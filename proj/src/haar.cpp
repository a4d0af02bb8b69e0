#include "minklab/haar.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "minklab/ensemble.hpp"
#include "minklab/enumeration.hpp"
#include "minklab/integer.hpp"
#include "minklab/minima.hpp"

namespace minklab {

Matrix IwasawaCoords::reconstruct() const { return k * a.asDiagonal() * n; }

IwasawaCoords iwasawa_decompose(const Matrix& g) {
  if (g.rows() != g.cols() || g.size() == 0) throw NotUnimodular("iwasawa: matrix must be square");
  const double det = g.determinant();
  if (!(std::abs(det - 1.0) <= 1e-8)) {
    throw NotUnimodular("iwasawa: determinant " + std::to_string(det) + " is not 1");
  }
  const int d = static_cast<int>(g.rows());
  const Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    if (r(i, i) < 0.0) {
      q.col(i) = -q.col(i);
      r.row(i) = -r.row(i);
    }
  }
  IwasawaCoords out;
  out.a = r.diagonal();
  out.n = out.a.cwiseInverse().asDiagonal() * r;
  out.n.diagonal().setOnes();
  out.k = std::move(q);
  return out;
}

double haar_density(const Vector& a) {
  // prod_{i<j} a_i/a_j = prod_i a_i^{d-1-2i} (0-based).
  const int d = static_cast<int>(a.size());
  double log_rho = 0.0;
  for (int i = 0; i < d; ++i) log_rho += (d - 1 - 2 * i) * std::log(a(i));
  return std::exp(log_rho);
}

bool SiegelSet::covers_fundamental_domain() const {
  return t >= 2.0 / std::sqrt(3.0) - 1e-15 && u >= 0.5;
}

bool SiegelSet::contains(const IwasawaCoords& coords, double rel_tol) const {
  const int d = static_cast<int>(coords.a.size());
  for (int i = 0; i + 1 < d; ++i) {
    if (coords.a(i) / coords.a(i + 1) > t * (1.0 + rel_tol)) return false;
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::abs(coords.n(i, j)) > u * (1.0 + rel_tol)) return false;
  return true;
}

double riemann_zeta(int s) {
  if (s < 2) throw InvalidRange("riemann_zeta: argument must be an integer >= 2");
  // Euler-Maclaurin: partial sum to N-1, integral tail, half term and
  // Bernoulli corrections.
  constexpr int kN = 16;
  constexpr double kBernoulli[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66,
                                   -691.0 / 2730};
  const double sd = s;
  double sum = 0.0;
  for (int n = kN - 1; n >= 1; --n) sum += std::pow(n, -sd);
  sum += std::pow(kN, 1.0 - sd) / (sd - 1.0) + 0.5 * std::pow(kN, -sd);
  double rising = sd;  // s (s+1) ... (s+2j-2)
  double factorial = 2.0;
  for (int j = 1; j <= 6; ++j) {
    sum += kBernoulli[j - 1] / factorial * rising * std::pow(kN, -sd - 2 * j + 1);
    rising *= (sd + 2 * j - 1) * (sd + 2 * j);
    factorial *= (2 * j + 1) * (2 * j + 2);
  }
  return sum;
}

VolumeConstants volume_constants(int d, int k) {
  if (d < 2 || k < 1 || k >= d) {
    throw InvalidRange("volume_constants: need 1 <= k < d (got d=" + std::to_string(d) +
                       ", k=" + std::to_string(k) + ")");
  }
  VolumeConstants c{1.0, 1.0, 1.0};
  for (int i = 1; i <= d - 1; ++i) {
    c.vol_k *= std::pow(std::numbers::pi, 0.5 * i) / std::tgamma(0.5 * i + 1.0);
  }
  for (int j = 2; j <= d; ++j) c.vol_x *= riemann_zeta(j);
  double denom = 1.0;
  for (int j = d - k + 1; j <= d; ++j) denom *= riemann_zeta(j);
  c.c_dk = 1.0 / denom;
  return c;
}

std::string to_string(SamplerKind kind) {
  return kind == SamplerKind::exact_d2 ? "exact" : "siegel";
}

SamplerKind sampler_from_string(const std::string& name) {
  if (name == "exact") return SamplerKind::exact_d2;
  if (name == "siegel") return SamplerKind::siegel;
  throw SchemaError("unknown sampler '" + name + "' (expected exact or siegel)");
}

namespace {

constexpr double kRootTailExponent = 27.631021115928547;  // ln(1e12)

int root_rate(int d, int m) { return m * (d - m); }  // m is 1-based

}  // namespace

Truncation siegel_truncation(int d, const SiegelSet& sset) {
  Truncation tr;
  const double log_t = std::log(sset.t);
  double log_a1_min = 0.0, log_a1_max = 0.0, kept = 1.0;
  for (int m = 1; m <= d - 1; ++m) {
    const double lo = log_t - kRootTailExponent / root_rate(d, m);
    tr.root_min.push_back(lo);
    tr.root_max.push_back(log_t);
    const double share = static_cast<double>(d - m) / d;
    log_a1_min += share * lo;
    log_a1_max += share * log_t;
    kept *= 1.0 - std::exp(-kRootTailExponent);
  }
  tr.a1_min = std::exp(log_a1_min);
  tr.a1_max = std::exp(log_a1_max);
  tr.tail_mass = 1.0 - kept;
  return tr;
}

Matrix random_rotation(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) m(i, j) = normal(rng);
  const Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR();
  for (int i = 0; i < d; ++i)
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

namespace {

constexpr std::uint64_t kStreamExact = 0x45584143;   // "EXAC"
constexpr std::uint64_t kStreamSiegel = 0x53494547;  // "SIEG"

WeightedSample exact_d2_sample(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double y0 = std::sqrt(3.0) / 2.0;
  double x = 0.0, y = 0.0;
  do {
    x = unit(rng) - 0.5;
    // y has density proportional to 1/y^2 on [y0, kExactYMax].
    y = y0 / (1.0 - unit(rng) * (1.0 - y0 / kExactYMax));
  } while (x * x + y * y < 1.0);
  Matrix g(2, 2);
  const double s = 1.0 / std::sqrt(y);
  g << s, s * x, 0.0, s * y;
  return WeightedSample{LatticeBasis(random_rotation(2, rng) * g), 1.0, {}};
}

WeightedSample siegel_sample(int d, const SiegelSet& sset, const Truncation& tr,
                             const std::vector<double>& tilt, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Simple-root coordinates s_m = log(a_m / a_{m+1}) are independent with
  // density exp(m (d-m) s_m) on (-inf, log t], truncated at root_min.
  // A tilt draws s_m at a slower rate c_m and reweights by the density ratio.
  std::vector<double> roots(d - 1);
  double tilt_weight = 1.0;
  for (int m = 1; m <= d - 1; ++m) {
    const double rate = root_rate(d, m);
    const double c = tilt.empty() ? rate : tilt[m - 1];
    const double span = tr.root_max[m - 1] - tr.root_min[m - 1];
    const double e = -std::log1p(-unit(rng) * -std::expm1(-c * span)) / c;
    roots[m - 1] = tr.root_max[m - 1] - e;
    tilt_weight *= std::exp(-(rate - c) * e);
  }
  double weighted = 0.0;
  for (int m = 1; m <= d - 1; ++m) weighted += m * roots[m - 1];
  Vector log_a(d);
  log_a(d - 1) = -weighted / d;
  for (int i = d - 2; i >= 0; --i) log_a(i) = log_a(i + 1) + roots[i];
  const Vector a = log_a.array().exp();

  Matrix n = Matrix::Identity(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) n(i, j) = sset.u * (2.0 * unit(rng) - 1.0);

  LatticeBasis basis(random_rotation(d, rng) * a.asDiagonal() * n);
  std::vector<double> minima = successive_minima(basis).values;
  const int m = count_siegel_translates(basis, minima, sset);
  return WeightedSample{std::move(basis), tilt_weight / m, std::move(minima)};
}

void validate_tilt(const SamplerConfig& config) {
  if (config.tilt.empty()) return;
  const int d = config.dim;
  if (static_cast<int>(config.tilt.size()) != d - 1) {
    throw InvalidRange("tilt needs d-1 rates, one per simple root");
  }
  for (int m = 1; m <= d - 1; ++m) {
    const double c = config.tilt[m - 1];
    if (!(c > 0.0 && c <= root_rate(d, m))) {
      throw InvalidRange("tilt rate " + std::to_string(m) + " must lie in (0, " +
                         std::to_string(root_rate(d, m)) + "]");
    }
  }
}

void require_siegel_dim(int d) {
  if (d < 2) throw InvalidRange("Siegel sampler: dimension must be at least 2");
  if (d > 3) {
    throw DimensionTooLarge("Siegel sampler: dimension " + std::to_string(d) +
                            " exceeds limit 3");
  }
}

}  // namespace

std::vector<WeightedSample> generate_block(const SamplerConfig& config, std::uint64_t seed,
                                           int block, int size) {
  std::vector<WeightedSample> out;
  out.reserve(size);
  if (config.kind == SamplerKind::exact_d2) {
    if (config.dim != 2) throw InvalidRange("exact sampler is only available for d = 2");
    if (!config.tilt.empty()) throw InvalidRange("tilt only applies to the Siegel sampler");
    auto rng = make_rng(seed, kStreamExact, static_cast<std::uint64_t>(block));
    for (int s = 0; s < size; ++s) out.push_back(exact_d2_sample(rng));
  } else {
    require_siegel_dim(config.dim);
    validate_tilt(config);
    const Truncation tr = siegel_truncation(config.dim, config.sset);
    auto rng = make_rng(seed, kStreamSiegel + 16 * config.dim, static_cast<std::uint64_t>(block));
    for (int s = 0; s < size; ++s) {
      out.push_back(siegel_sample(config.dim, config.sset, tr, config.tilt, rng));
    }
  }
  return out;
}

SampleEnsemble sample_ensemble(const SamplerConfig& config, int count, std::uint64_t seed,
                               int jobs) {
  if (count < 1) throw InvalidRange("sample count must be at least 1");
  const int blocks = block_count(count);
  std::vector<std::vector<WeightedSample>> parts(blocks);
  parallel_for(blocks, jobs, [&](int b) {
    parts[b] = generate_block(config, seed, b, block_length(count, b));
  });
  SampleEnsemble ens;
  ens.seed = seed;
  ens.dim = config.dim;
  ens.sampler = config.kind;
  ens.weight_kind =
      config.kind == SamplerKind::exact_d2 ? WeightKind::exact : WeightKind::importance;
  ens.sset = config.sset;
  ens.tilt = config.tilt;
  if (!config.tilt.empty()) ens.weight_kind = WeightKind::importance;
  ens.samples.reserve(count);
  for (auto& part : parts)
    for (auto& s : part) ens.samples.push_back(std::move(s));
  return ens;
}

SampleEnsemble sample_exact_d2(int count, std::uint64_t seed, int jobs) {
  return sample_ensemble({SamplerKind::exact_d2, 2, {}, {}}, count, seed, jobs);
}

SampleEnsemble sample_siegel(int d, int count, std::uint64_t seed, const SiegelSet& sset,
                             int jobs) {
  require_siegel_dim(d);
  return sample_ensemble({SamplerKind::siegel, d, sset, {}}, count, seed, jobs);
}

nlohmann::json SampleEnsemble::header() const {
  nlohmann::json h = {{"seed", seed},
                      {"dim", dim},
                      {"sampler", to_string(sampler)},
                      {"weight_kind", weight_kind == WeightKind::exact ? "exact" : "importance"},
                      {"count", samples.size()},
                      {"block_size", kBlockSize}};
  if (sampler == SamplerKind::exact_d2) {
    h["truncation"] = {{"y_max", kExactYMax},
                       {"tail_mass", 3.0 / (std::numbers::pi * kExactYMax)}};
  } else {
    const Truncation tr = siegel_truncation(dim, sset);
    h["siegel_set"] = {{"t", sset.t}, {"u", sset.u}};
    if (!tilt.empty()) h["tilt"] = tilt;
    h["truncation"] = {{"a1_min", tr.a1_min},
                       {"a1_max", tr.a1_max},
                       {"root_min", tr.root_min},
                       {"root_max", tr.root_max},
                       {"tail_mass", tr.tail_mass}};
  }
  return h;
}

int count_siegel_translates(const LatticeBasis& basis, const SiegelSet& sset) {
  if (basis.dim() > 3) {
    throw DimensionTooLarge("count_siegel_translates: dimension " +
                            std::to_string(basis.dim()) + " exceeds limit 3");
  }
  return count_siegel_translates(basis, successive_minima(basis).values, sset);
}

int count_siegel_translates(const LatticeBasis& basis, const std::vector<double>& minima,
                            const SiegelSet& sset) {
  const int d = basis.dim();
  if (d > 3) {
    throw DimensionTooLarge("count_siegel_translates: dimension " + std::to_string(d) +
                            " exceeds limit 3");
  }
  constexpr double kTol = 1e-12;
  const double t = sset.t, u = sset.u;

  // Column j of a Siegel basis has norm at most
  // a_j sqrt(1 + u^2 sum_{i<j} t^{2(j-i)}) and a_j <= t^{d-1-j} lambda_j.
  std::vector<double> bound(d);
  for (int j = 0; j < d; ++j) {
    double spread = 1.0;
    for (int i = 0; i < j; ++i) spread += u * u * std::pow(t, 2.0 * (j - i));
    bound[j] = std::pow(t, d - 1 - j) * std::sqrt(spread) * minima[j] * (1.0 + 1e-9);
  }
  const bool positive = basis.columns().determinant() > 0.0;
  std::vector<Vector> q(d);
  std::vector<double> a(d);
  IntMatrix coeffs(d, d);
  long count = 0;

  // Column j is searched outside the span of columns 0..j-1 with |n_ij| <= u.
  std::function<void(int)> descend = [&](int j) {
    if (j == d) {
      const __int128 det = integer::determinant(coeffs);
      if ((positive && det == 1) || (!positive && det == -1)) ++count;
      return;
    }
    const IntMatrix prefix = coeffs.leftCols(j);
    if (j > 0) {
      std::vector<IntVector> rows;
      for (int c = 0; c < j; ++c) rows.push_back(prefix.col(c));
      if (!integer::is_primitive(rows)) return;
    }
    const AdaptedBasis adapted = adapt_to_prefix(basis, prefix, false);
    for (const auto& local : enumerate_outside_span(adapted.basis, j, bound[j], u)) {
      const LatticeVector v = LatticeVector::from_coeffs(basis, adapted.transform * local.coeffs);
      Vector w = v.embedding;
      bool ok = true;
      for (int i = 0; i < j && ok; ++i) {
        const double r = q[i].dot(v.embedding);
        if (std::abs(r / a[i]) > u * (1.0 + kTol)) ok = false;
        w -= r * q[i];
      }
      if (!ok) continue;
      const double aj = w.norm();
      if (aj <= 1e-12 * v.norm) continue;
      if (j > 0 && a[j - 1] / aj > t * (1.0 + kTol)) continue;
      q[j] = w / aj;
      a[j] = aj;
      coeffs.col(j) = v.coeffs;
      descend(j + 1);
    }
  };
  descend(0);

  // -I lies in SL(d,Z) for even d and fixes every lattice.
  const long center = d % 2 == 0 ? 2 : 1;
  const long m = count / center;
  if (m < 1) throw InvalidRange("count_siegel_translates: basis does not lie in the Siegel set");
  return static_cast<int>(m);
}

LatticeBasis draw_haar_lattice(int d, std::mt19937_64& rng) {
  if (d == 2) return exact_d2_sample(rng).basis;
  require_siegel_dim(d);
  const SiegelSet sset{};
  const Truncation tr = siegel_truncation(d, sset);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (true) {
    WeightedSample s = siegel_sample(d, sset, tr, {}, rng);
    if (unit(rng) < s.weight) return std::move(s.basis);
  }
}

}  // namespace minklab
