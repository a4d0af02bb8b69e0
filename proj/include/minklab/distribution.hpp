#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include "minklab/haar.hpp"
#include "minklab/report.hpp"

namespace minklab {

struct EstimateOptions {
  std::optional<SamplerKind> sampler;  // default: exact at d = 2, Siegel at d = 3
  int jobs = 1;
  std::pair<double, double> fit_window{0.05, 0.3};
  double min_effective_hits = 30.0;
  std::vector<double> tilt;  // Siegel proposal rates, see SamplerConfig
};

/// Weighted empirical Phi_i(delta) = mu{lambda_i <= delta} with a log-log
/// exponent fit over the fit window.
ExperimentReport estimate_phi(int d, int i, std::span<const double> deltas, int count,
                              std::uint64_t seed, const EstimateOptions& options = {});

struct TailReport {
  ExperimentReport primal;        // P(lambda_i(L) >= 1/delta)
  ExperimentReport dual;          // P(lambda_i(L*) >= 1/delta)
  ExperimentReport dual_bound;    // P(lambda_{d+1-i}(L*) <= d! delta)
  long sandwich_violations = 0;   // samples breaking 1 <= lambda_r lambda*_{d+1-r} <= d!
  long implication_violations = 0;
  double ks_distance = 0.0;       // lambda_1 of primal vs dual ensemble
  double ks_threshold = 0.0;

  nlohmann::json to_json() const;
};

TailReport estimate_tail(int d, int i, std::span<const double> deltas, int count,
                         std::uint64_t seed, const EstimateOptions& options = {});

/// Unnormalized Haar mass of the explicit Siegel-set box whose lattices have
/// their first i minima below delta (i = d - 1).
double siegel_set_box_measure(int d, int i, double delta);

/// Fit log(estimate) against log(x) on the eligible grid points.
void fit_exponent(ExperimentReport& report);

}  // namespace minklab
