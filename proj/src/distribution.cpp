#include "minklab/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "minklab/ensemble.hpp"
#include "minklab/minima.hpp"
#include "minklab/stats.hpp"

namespace minklab {

namespace {

void require_grid(std::span<const double> deltas) {
  if (deltas.empty()) throw InvalidRange("delta grid is empty");
  for (double x : deltas) {
    if (!(x > 0.0 && x <= 0.5)) {
      throw InvalidRange("delta " + std::to_string(x) + " outside (0, 0.5]");
    }
  }
}

SamplerConfig default_sampler(int d, const EstimateOptions& options) {
  SamplerConfig config;
  config.dim = d;
  config.kind = options.sampler.value_or(d == 2 ? SamplerKind::exact_d2 : SamplerKind::siegel);
  config.tilt = options.tilt;
  if (config.kind == SamplerKind::exact_d2 && !config.tilt.empty()) {
    throw InvalidRange("tilt only applies to the Siegel sampler");
  }
  return config;
}

const std::vector<double>& minima_of(WeightedSample& s) {
  if (s.minima.empty()) s.minima = successive_minima(s.basis).values;
  return s.minima;
}

ExperimentReport make_report(const std::string& quantity, std::span<const double> deltas,
                             const std::vector<WeightedMean>& acc, std::uint64_t seed, int count,
                             const EstimateOptions& options) {
  ExperimentReport report;
  report.quantity = quantity;
  report.seed = seed;
  report.sample_count = count;
  report.fit_window = options.fit_window;
  for (std::size_t g = 0; g < deltas.size(); ++g) {
    GridPoint p;
    p.x = deltas[g];
    p.estimate = acc[g].mean();
    p.standard_error = acc[g].standard_error();
    p.effective_hits = acc[g].effective_hits();
    p.insufficient_mass = p.effective_hits < options.min_effective_hits;
    report.grid.push_back(p);
  }
  fit_exponent(report);
  return report;
}

double factorial(int d) { return std::tgamma(d + 1.0); }

}  // namespace

void fit_exponent(ExperimentReport& report) {
  std::vector<double> x, y, w;
  const double lo = report.fit_window.first * (1.0 - 1e-12);
  const double hi = report.fit_window.second * (1.0 + 1e-12);
  for (auto& p : report.grid) {
    p.in_fit = p.x >= lo && p.x <= hi && !p.insufficient_mass && p.estimate > 0.0 &&
               p.standard_error > 0.0;
    if (!p.in_fit) continue;
    x.push_back(std::log(p.x));
    y.push_back(std::log(p.estimate));
    const double rel = p.standard_error / p.estimate;
    w.push_back(1.0 / (rel * rel));
  }
  report.fit_points = static_cast<int>(x.size());
  if (x.size() < 4) {
    report.fitted_exponent = std::nan("");
    report.fit_stderr = std::nan("");
    return;
  }
  const LinearFit fit = weighted_linear_fit(x, y, w);
  report.fitted_exponent = fit.slope;
  report.fit_stderr = fit.slope_stderr;
}

ExperimentReport estimate_phi(int d, int i, std::span<const double> deltas, int count,
                              std::uint64_t seed, const EstimateOptions& options) {
  if (d < 2 || d > 3) throw InvalidRange("estimate_phi: dimension must be 2 or 3");
  if (i < 1 || i > d - 1) throw InvalidRange("estimate_phi: need 1 <= i <= d-1");
  if (count < 1) throw InvalidRange("estimate_phi: count must be at least 1");
  require_grid(deltas);

  const SamplerConfig config = default_sampler(d, options);
  const int blocks = block_count(count);
  const std::size_t g = deltas.size();
  std::vector<std::vector<WeightedMean>> partial(blocks, std::vector<WeightedMean>(g));
  parallel_for(blocks, options.jobs, [&](int b) {
    for (auto& s : generate_block(config, seed, b, block_length(count, b))) {
      const double lambda = minima_of(s)[i - 1];
      for (std::size_t k = 0; k < g; ++k) partial[b][k].add(s.weight, lambda <= deltas[k] ? 1 : 0);
    }
  });
  std::vector<WeightedMean> acc(g);
  for (const auto& part : partial)
    for (std::size_t k = 0; k < g; ++k) acc[k].merge(part[k]);

  ExperimentReport report = make_report("Phi_" + std::to_string(i) + " (d=" +
                                            std::to_string(d) + ")",
                                        deltas, acc, seed, count, options);
  report.extra = {{"dim", d},
                  {"i", i},
                  {"expected_exponent", d * i},
                  {"sampler", to_string(config.kind)},
                  {"tilt", config.tilt},
                  {"block_size", kBlockSize},
                  {"blocks", blocks}};
  return report;
}

nlohmann::json TailReport::to_json() const {
  return {{"primal", primal.to_json()},
          {"dual", dual.to_json()},
          {"dual_bound", dual_bound.to_json()},
          {"sandwich_violations", sandwich_violations},
          {"implication_violations", implication_violations},
          {"ks_distance", ks_distance},
          {"ks_threshold", ks_threshold}};
}

TailReport estimate_tail(int d, int i, std::span<const double> deltas, int count,
                         std::uint64_t seed, const EstimateOptions& options) {
  if (d < 2 || d > 3) throw InvalidRange("estimate_tail: dimension must be 2 or 3");
  if (i < 2 || i > d) throw InvalidRange("estimate_tail: need 2 <= i <= d");
  if (count < 1) throw InvalidRange("estimate_tail: count must be at least 1");
  require_grid(deltas);

  const SamplerConfig config = default_sampler(d, options);
  const double dfact = factorial(d);
  const int blocks = block_count(count);
  const std::size_t g = deltas.size();

  struct Part {
    std::vector<WeightedMean> primal, dual, bound;
    long sandwich = 0, implication = 0;
    std::vector<double> weight, lambda1, dual_lambda1;
  };
  std::vector<Part> parts(blocks);
  parallel_for(blocks, options.jobs, [&](int b) {
    Part& part = parts[b];
    part.primal.resize(g);
    part.dual.resize(g);
    part.bound.resize(g);
    for (auto& s : generate_block(config, seed, b, block_length(count, b))) {
      const std::vector<double>& lam = minima_of(s);
      const std::vector<double> lam_dual = successive_minima(minklab::dual(s.basis)).values;
      for (int r = 0; r < d; ++r) {
        const double prod = lam[r] * lam_dual[d - 1 - r];
        if (prod < 1.0 - 1e-9 || prod > dfact + 1e-9) ++part.sandwich;
      }
      for (std::size_t k = 0; k < g; ++k) {
        const bool tail = lam[i - 1] >= 1.0 / deltas[k];
        const bool dual_tail = lam_dual[i - 1] >= 1.0 / deltas[k];
        const bool bound = lam_dual[d - i] <= dfact * deltas[k] * (1.0 + 1e-9);
        part.primal[k].add(s.weight, tail ? 1 : 0);
        part.dual[k].add(s.weight, dual_tail ? 1 : 0);
        part.bound[k].add(s.weight, bound ? 1 : 0);
        if (tail && !bound) ++part.implication;
      }
      part.weight.push_back(s.weight);
      part.lambda1.push_back(lam[0]);
      part.dual_lambda1.push_back(lam_dual[0]);
    }
  });

  std::vector<WeightedMean> primal(g), dual(g), bound(g);
  TailReport out;
  std::vector<double> weight, lambda1, dual_lambda1;
  for (const auto& part : parts) {
    for (std::size_t k = 0; k < g; ++k) {
      primal[k].merge(part.primal[k]);
      dual[k].merge(part.dual[k]);
      bound[k].merge(part.bound[k]);
    }
    out.sandwich_violations += part.sandwich;
    out.implication_violations += part.implication;
    weight.insert(weight.end(), part.weight.begin(), part.weight.end());
    lambda1.insert(lambda1.end(), part.lambda1.begin(), part.lambda1.end());
    dual_lambda1.insert(dual_lambda1.end(), part.dual_lambda1.begin(), part.dual_lambda1.end());
  }

  const std::string tag = " (d=" + std::to_string(d) + ")";
  out.primal = make_report("P(lambda_" + std::to_string(i) + " >= 1/delta)" + tag, deltas,
                           primal, seed, count, options);
  out.dual = make_report("P(dual lambda_" + std::to_string(i) + " >= 1/delta)" + tag, deltas,
                         dual, seed, count, options);
  out.dual_bound = make_report("P(dual lambda_" + std::to_string(d + 1 - i) +
                                   " <= d! delta)" + tag,
                               deltas, bound, seed, count, options);
  const nlohmann::json extra = {{"dim", d},
                                {"i", i},
                                {"expected_exponent", d * (d + 1 - i)},
                                {"sampler", to_string(config.kind)},
                  {"tilt", config.tilt},
                                {"block_size", kBlockSize},
                                {"blocks", blocks}};
  out.primal.extra = extra;
  out.dual.extra = extra;
  out.dual_bound.extra = extra;

  // Weighted two-sample Kolmogorov-Smirnov distance of lambda_1.
  const std::size_t n = weight.size();
  std::vector<std::size_t> pa(n), pb(n);
  for (std::size_t k = 0; k < n; ++k) pa[k] = pb[k] = k;
  std::sort(pa.begin(), pa.end(), [&](auto x, auto y) { return lambda1[x] < lambda1[y]; });
  std::sort(pb.begin(), pb.end(),
            [&](auto x, auto y) { return dual_lambda1[x] < dual_lambda1[y]; });
  double total = 0.0, total_sq = 0.0;
  for (double w : weight) {
    total += w;
    total_sq += w * w;
  }
  double fa = 0.0, fb = 0.0, dmax = 0.0;
  std::size_t ia = 0, ib = 0;
  while (ia < n || ib < n) {
    const double va = ia < n ? lambda1[pa[ia]] : INFINITY;
    const double vb = ib < n ? dual_lambda1[pb[ib]] : INFINITY;
    const double v = std::min(va, vb);
    while (ia < n && lambda1[pa[ia]] == v) fa += weight[pa[ia++]];
    while (ib < n && dual_lambda1[pb[ib]] == v) fb += weight[pb[ib++]];
    dmax = std::max(dmax, std::abs(fa - fb) / total);
  }
  const double ess = total * total / total_sq;
  out.ks_distance = dmax;
  out.ks_threshold = 1.36 * std::sqrt(2.0 / ess);
  return out;
}

double siegel_set_box_measure(int d, int i, double delta) {
  if (d < 2 || d > 3) throw InvalidRange("siegel_set_box_measure: dimension must be 2 or 3");
  if (i != d - 1) throw InvalidRange("siegel_set_box_measure: requires i = d - 1");
  if (!(delta > 0.0 && delta <= 0.3)) {
    throw InvalidRange("siegel_set_box_measure: delta must lie in (0, 0.3]");
  }
  using boost::math::quadrature::gauss_kronrod;
  const double ceiling = delta / std::sqrt(static_cast<double>(i));
  const double step = std::sqrt(3.0) / 2.0;

  // rho(a) / (a_1 ... a_{d-1}) with a_d = 1 / (a_1 ... a_{d-1}).
  Vector a(d);
  auto integrand = [&]() {
    double prod = 1.0;
    for (int j = 0; j < d - 1; ++j) prod *= a(j);
    a(d - 1) = 1.0 / prod;
    return haar_density(a) / prod;
  };
  // a_j ranges over [(sqrt 3 / 2) a_{j-1}, delta / sqrt i], with a_0 = 0.
  std::function<double(int)> level = [&](int j) -> double {
    if (j == d - 1) return integrand();
    const double lo = j == 0 ? 0.0 : step * a(j - 1);
    return gauss_kronrod<double, 31>::integrate(
        [&, j](double x) {
          a(j) = x;
          return level(j + 1);
        },
        lo, ceiling, 15, 1e-12);
  };
  const double box = level(0);
  const double n_volume = std::pow(0.5, d * (d - 1) / 2);
  return volume_constants(d, 1).vol_k * n_volume * box;
}

}  // namespace minklab
