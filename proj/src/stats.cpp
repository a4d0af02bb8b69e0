#include "minklab/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace minklab {

void WeightedMean::add(double weight, double value) {
  sum_w += weight;
  sum_w2 += weight * weight;
  sum_wf += weight * value;
  sum_w2f += weight * weight * value;
  sum_w2f2 += weight * weight * value * value;
  ++count;
}

void WeightedMean::merge(const WeightedMean& other) {
  sum_w += other.sum_w;
  sum_w2 += other.sum_w2;
  sum_wf += other.sum_wf;
  sum_w2f += other.sum_w2f;
  sum_w2f2 += other.sum_w2f2;
  count += other.count;
}

double WeightedMean::mean() const { return sum_w > 0.0 ? sum_wf / sum_w : 0.0; }

double WeightedMean::standard_error() const {
  if (sum_w <= 0.0) return 0.0;
  const double mu = mean();
  // sum w^2 (f - mu)^2 / (sum w)^2
  const double num = sum_w2f2 - 2.0 * mu * sum_w2f + mu * mu * sum_w2;
  return std::sqrt(std::max(num, 0.0)) / sum_w;
}

double WeightedMean::effective_size() const {
  return sum_w2 > 0.0 ? sum_w * sum_w / sum_w2 : 0.0;
}

double WeightedMean::effective_hits() const {
  return sum_w2f > 0.0 ? sum_wf * sum_wf / sum_w2f : 0.0;
}

LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> w) {
  if (x.size() != y.size() || x.size() != w.size()) {
    throw std::invalid_argument("weighted_linear_fit: size mismatch");
  }
  LinearFit fit;
  fit.points = static_cast<int>(x.size());
  if (fit.points < 2) return fit;
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  // Weights are inverse variances, so 1/sxx is the slope variance; inflate
  // by the reduced chi^2 when the residuals say the model is rougher.
  double chi2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    chi2 += w[i] * r * r;
  }
  const double scale = fit.points > 2 ? std::max(1.0, chi2 / (fit.points - 2)) : 1.0;
  fit.slope_stderr = std::sqrt(scale / sxx);
  return fit;
}

}  // namespace minklab
