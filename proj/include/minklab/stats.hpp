#pragma once

#include <span>

namespace minklab {

/// Self-normalized importance-sampling mean, mergeable across blocks.
struct WeightedMean {
  double sum_w = 0.0;
  double sum_w2 = 0.0;
  double sum_wf = 0.0;
  double sum_w2f = 0.0;
  double sum_w2f2 = 0.0;
  long count = 0;

  void add(double weight, double value);
  void merge(const WeightedMean& other);

  double mean() const;
  /// Delta-method standard error of the ratio estimator.
  double standard_error() const;
  /// Kish effective sample size of the whole ensemble.
  double effective_size() const;
  /// Kish effective count of the samples with value 1 (indicator use).
  double effective_hits() const;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  int points = 0;
};

/// Weighted least squares y ~ intercept + slope * x.
LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> w);

}  // namespace minklab
