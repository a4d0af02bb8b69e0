#include "minklab/flows.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "minklab/ensemble.hpp"
#include "minklab/haar.hpp"
#include "minklab/lll.hpp"
#include "minklab/minima.hpp"
#include "minklab/stats.hpp"

namespace minklab {

namespace {

constexpr std::uint64_t kStreamFlow = 0x464c4f57;  // "FLOW"

double log_minimum(const LatticeBasis& basis, int i) {
  return -std::log(successive_minima(basis).values[i - 1]);
}

void require_orbit_range(int d, int i) {
  if (d < 2 || d > 3) throw InvalidRange("flow experiments need d in {2, 3}");
  if (i < 1 || i > d - 1) throw InvalidRange("flow experiments need 1 <= i <= d-1");
}

}  // namespace

FlowSpec FlowSpec::diagonal(Vector z) {
  FlowSpec spec;
  spec.kind = FlowKind::diagonal;
  spec.z = std::move(z);
  spec.validate();
  return spec;
}

FlowSpec FlowSpec::unipotent(Matrix n) {
  FlowSpec spec;
  spec.kind = FlowKind::unipotent;
  spec.nilpotent = std::move(n);
  spec.validate();
  return spec;
}

int FlowSpec::dim() const {
  return static_cast<int>(kind == FlowKind::diagonal ? z.size() : nilpotent.rows());
}

void FlowSpec::validate() const {
  if (kind == FlowKind::diagonal) {
    if (z.size() < 2) throw InvalidRange("diagonal flow needs at least two exponents");
    if (std::abs(z.sum()) > 1e-12) throw InvalidRange("diagonal flow exponents must sum to 0");
    if (z.cwiseAbs().maxCoeff() <= 0.0) throw InvalidRange("diagonal flow exponents are all 0");
  } else {
    if (nilpotent.rows() != nilpotent.cols() || nilpotent.rows() < 2) {
      throw InvalidRange("unipotent generator must be a square matrix of size >= 2");
    }
    for (int r = 0; r < nilpotent.rows(); ++r)
      for (int c = 0; c <= r; ++c)
        if (nilpotent(r, c) != 0.0) {
          throw InvalidRange("unipotent generator must be strictly upper triangular");
        }
  }
}

Matrix FlowSpec::matrix(double t) const {
  const int d = dim();
  if (kind == FlowKind::diagonal) return (t * z).array().exp().matrix().asDiagonal();
  Matrix result = Matrix::Identity(d, d);
  Matrix term = Matrix::Identity(d, d);
  for (int k = 1; k < d; ++k) {
    term = term * (t * nilpotent) / static_cast<double>(k);
    result += term;
  }
  return result;
}

double FlowSpec::max_direct_step() const {
  if (kind == FlowKind::diagonal) return 4.0 / z.cwiseAbs().maxCoeff();
  const double norm = operator_norm(nilpotent);
  return norm > 0.0 ? 64.0 / norm : INFINITY;
}

namespace {

LatticeBasis flow_steps(const FlowSpec& spec, double t, LatticeBasis basis) {
  const int steps = static_cast<int>(std::ceil(std::abs(t) / spec.max_direct_step()));
  const Matrix step = spec.matrix(t / steps);
  for (int s = 0; s < steps; ++s) basis = LatticeBasis(lll_reduce(step * basis.columns()).reduced);
  return basis;
}

}  // namespace

LatticeBasis apply_flow(const FlowSpec& spec, double t, const LatticeBasis& basis) {
  spec.validate();
  if (spec.dim() != basis.dim()) throw InvalidRange("flow and basis dimensions differ");
  if (std::abs(t) <= spec.max_direct_step()) return LatticeBasis(spec.matrix(t) * basis.columns());
  return flow_steps(spec, t, basis);
}

OrbitWalker::OrbitWalker(FlowSpec spec, const LatticeBasis& start)
    : spec_(std::move(spec)), current_(lll_reduce(start.columns()).reduced) {
  spec_.validate();
  if (spec_.dim() != start.dim()) throw InvalidRange("flow and basis dimensions differ");
}

const LatticeBasis& OrbitWalker::advance_to(double t) {
  if (t < time_) throw InvalidRange("OrbitWalker only moves forward in time");
  if (t > time_) {
    current_ = flow_steps(spec_, t - time_, current_);
    time_ = t;
  }
  return current_;
}

std::vector<double> geometric_grid(double t_max, int points, double ratio) {
  std::vector<double> times(points);
  for (int k = 0; k < points; ++k) times[k] = t_max * std::pow(ratio, -(points - 1 - k));
  return times;
}

LogLawTrace log_law_trace(const FlowSpec& spec, const LatticeBasis& basis, int i, double t_max,
                          int grid) {
  require_orbit_range(basis.dim(), i);
  if (!(t_max > 1.0 && t_max <= 1e5)) throw InvalidRange("log_law_trace: t_max must be in (1, 1e5]");
  if (grid < 2) throw InvalidRange("log_law_trace: grid needs at least 2 points");
  LogLawTrace trace;
  trace.times = geometric_grid(t_max, grid);
  if (!(trace.times.front() > 1.0)) {
    throw InvalidRange("log_law_trace: grid starts at t <= 1 where log t <= 0");
  }
  OrbitWalker walker(spec, basis);
  double running = -INFINITY;
  for (double t : trace.times) {
    const double delta = log_minimum(walker.advance_to(t), i);
    running = std::max(running, delta / std::log(t));
    trace.delta_values.push_back(delta);
    trace.running_ratio.push_back(running);
  }
  return trace;
}

std::vector<SeededTrace> log_law_ensemble(const FlowSpec& spec, int i, double t_max, int grid,
                                          int seeds, std::uint64_t seed, int jobs) {
  require_orbit_range(spec.dim(), i);
  std::vector<SeededTrace> out(seeds);
  parallel_for(seeds, jobs, [&](int s) {
    auto rng = make_rng(seed, kStreamFlow, static_cast<std::uint64_t>(s));
    const LatticeBasis start = draw_haar_lattice(spec.dim(), rng);
    out[s] = SeededTrace{static_cast<std::uint64_t>(s), log_law_trace(spec, start, i, t_max, grid)};
  });
  return out;
}

nlohmann::json BorelCantelliReport::to_json() const {
  return {{"t_maxes", t_maxes},
          {"violation_fractions", violation_fractions},
          {"mean_fraction", mean_fraction},
          {"nonincreasing_share", nonincreasing_share}};
}

BorelCantelliReport borel_cantelli_upper_check(const FlowSpec& spec, int d, int i,
                                               double epsilon, int seeds, std::uint64_t seed,
                                               std::vector<double> t_maxes, int jobs) {
  if (spec.dim() != d) throw InvalidRange("flow dimension differs from d");
  require_orbit_range(d, i);
  if (seeds < 1) throw InvalidRange("borel_cantelli_upper_check: seeds must be positive");
  std::sort(t_maxes.begin(), t_maxes.end());
  const double rate = 1.0 / (d * i) + epsilon;

  BorelCantelliReport report;
  report.t_maxes = t_maxes;
  report.violation_fractions.assign(seeds, std::vector<double>(t_maxes.size(), 0.0));
  parallel_for(seeds, jobs, [&](int s) {
    auto rng = make_rng(seed, kStreamFlow, static_cast<std::uint64_t>(s));
    OrbitWalker walker(spec, draw_haar_lattice(d, rng));
    for (std::size_t w = 0; w < t_maxes.size(); ++w) {
      const long first = static_cast<long>(std::ceil(t_maxes[w] / 2.0));
      const long last = static_cast<long>(std::floor(t_maxes[w]));
      long total = 0, violations = 0;
      for (long t = std::max(first, 2L); t <= last; ++t) {
        if (static_cast<double>(t) < walker.time()) continue;
        const double delta = log_minimum(walker.advance_to(static_cast<double>(t)), i);
        ++total;
        if (delta > rate * std::log(static_cast<double>(t))) ++violations;
      }
      report.violation_fractions[s][w] = total > 0 ? static_cast<double>(violations) / total : 0.0;
    }
  });

  report.mean_fraction.assign(t_maxes.size(), 0.0);
  int monotone = 0;
  for (const auto& row : report.violation_fractions) {
    for (std::size_t w = 0; w < row.size(); ++w) report.mean_fraction[w] += row[w] / seeds;
    bool ok = true;
    for (std::size_t w = 1; w < row.size(); ++w) ok = ok && row[w] <= row[w - 1];
    monotone += ok ? 1 : 0;
  }
  report.nonincreasing_share = static_cast<double>(monotone) / seeds;
  return report;
}

std::optional<long> hitting_time(const FlowSpec& spec, const LatticeBasis& basis, int i,
                                 double level, long m_max) {
  if (i < 1 || i > basis.dim()) throw InvalidRange("hitting_time: index out of range");
  OrbitWalker walker(spec, basis);
  for (long m = 1; m <= m_max; ++m) {
    if (successive_minima(walker.advance_to(static_cast<double>(m))).values[i - 1] <= level) {
      return m;
    }
  }
  return std::nullopt;
}

nlohmann::json HittingTimeReport::to_json() const {
  return {{"levels", levels},   {"mean_log_time", mean_log_time},
          {"censored", censored}, {"slope", slope},
          {"slope_stderr", slope_stderr}, {"seed", seed},
          {"seeds", seeds}};
}

HittingTimeReport hitting_time_regression(const FlowSpec& spec, int i,
                                          const std::vector<double>& levels, int seeds,
                                          std::uint64_t seed, long m_max, int jobs) {
  const int d = spec.dim();
  require_orbit_range(d, i);
  if (levels.size() < 2) throw InvalidRange("hitting_time_regression: need at least two levels");
  if (seeds < 1 || m_max < 1) throw InvalidRange("hitting_time_regression: bad budget");

  const std::size_t nl = levels.size();
  std::vector<std::vector<long>> hits(seeds, std::vector<long>(nl, 0));
  parallel_for(seeds, jobs, [&](int s) {
    auto rng = make_rng(seed, kStreamFlow + 1, static_cast<std::uint64_t>(s));
    OrbitWalker walker(spec, draw_haar_lattice(d, rng));
    std::size_t open = nl;
    for (long m = 1; m <= m_max && open > 0; ++m) {
      const double lambda = successive_minima(walker.advance_to(static_cast<double>(m))).values[i - 1];
      for (std::size_t l = 0; l < nl; ++l) {
        if (hits[s][l] == 0 && lambda <= std::exp(-levels[l])) {
          hits[s][l] = m;
          --open;
        }
      }
    }
  });

  HittingTimeReport report;
  report.levels = levels;
  report.seed = seed;
  report.seeds = seeds;
  report.mean_log_time.assign(nl, 0.0);
  report.censored.assign(nl, 0);
  std::vector<double> sum_sq(nl, 0.0);
  for (const auto& row : hits) {
    for (std::size_t l = 0; l < nl; ++l) {
      const long m = row[l] > 0 ? row[l] : m_max;
      if (row[l] == 0) ++report.censored[l];
      const double lm = std::log(static_cast<double>(m));
      report.mean_log_time[l] += lm / seeds;
      sum_sq[l] += lm * lm;
    }
  }
  std::vector<double> weights(nl, 1.0);
  if (seeds > 1) {
    for (std::size_t l = 0; l < nl; ++l) {
      const double mean = report.mean_log_time[l];
      const double var = std::max((sum_sq[l] - seeds * mean * mean) / (seeds - 1), 1e-12);
      weights[l] = seeds / var;
    }
  }
  const LinearFit fit = weighted_linear_fit(levels, report.mean_log_time, weights);
  report.slope = fit.slope;
  report.slope_stderr = fit.slope_stderr;
  return report;
}

}  // namespace minklab
