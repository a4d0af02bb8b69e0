#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "minklab/distribution.hpp"

using namespace minklab;

TEST_CASE("explicit box measure scales with the expected exponent") {
  const double r2 = siegel_set_box_measure(2, 1, 0.2) / siegel_set_box_measure(2, 1, 0.1);
  CHECK(r2 == doctest::Approx(4.0).epsilon(0.02));
  const double r3 = siegel_set_box_measure(3, 2, 0.2) / siegel_set_box_measure(3, 2, 0.1);
  CHECK(r3 == doctest::Approx(64.0).epsilon(0.02));
  double prev = 0.0;
  for (double delta : {0.05, 0.1, 0.15, 0.2, 0.25, 0.3}) {
    const double m = siegel_set_box_measure(3, 2, delta);
    CHECK(m > prev);
    prev = m;
  }
  CHECK_THROWS_AS(siegel_set_box_measure(3, 1, 0.1), InvalidRange);
  CHECK_THROWS_AS(siegel_set_box_measure(2, 1, 0.5), InvalidRange);
  CHECK_THROWS_AS(siegel_set_box_measure(4, 3, 0.1), InvalidRange);
}

TEST_CASE("exponent fit on synthetic data") {
  ExperimentReport r;
  r.fit_window = {0.05, 0.3};
  for (double x : {0.05, 0.1, 0.15, 0.2, 0.3, 0.4}) {
    GridPoint p;
    p.x = x;
    p.estimate = 0.7 * std::pow(x, 3.0);
    p.standard_error = 0.01 * p.estimate;
    r.grid.push_back(p);
  }
  fit_exponent(r);
  CHECK(r.fitted_exponent == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(r.fit_points == 5);
  CHECK_FALSE(r.grid.back().in_fit);

  r.grid[0].insufficient_mass = true;
  r.grid[1].insufficient_mass = true;
  fit_exponent(r);
  CHECK(std::isnan(r.fitted_exponent));
}

TEST_CASE("estimator argument checks") {
  const std::vector<double> deltas{0.1, 0.2};
  CHECK_THROWS_AS(estimate_phi(4, 1, deltas, 10, 1), InvalidRange);
  CHECK_THROWS_AS(estimate_phi(2, 2, deltas, 10, 1), InvalidRange);
  CHECK_THROWS_AS(estimate_phi(2, 1, deltas, 0, 1), InvalidRange);
  CHECK_THROWS_AS(estimate_phi(2, 1, std::vector<double>{}, 10, 1), InvalidRange);
  CHECK_THROWS_AS(estimate_phi(2, 1, std::vector<double>{0.7}, 10, 1), InvalidRange);
  CHECK_THROWS_AS(estimate_tail(3, 1, deltas, 10, 1), InvalidRange);
  EstimateOptions tilted;
  tilted.tilt = {1.0};
  CHECK_THROWS_AS(estimate_phi(2, 1, deltas, 10, 1, tilted), InvalidRange);
}

TEST_CASE("small estimates") {
  const std::vector<double> deltas{0.05, 0.075, 0.1, 0.15, 0.2, 0.25, 0.3};
  const ExperimentReport phi = estimate_phi(2, 1, deltas, 40000, 11);
  CHECK(phi.fit_points >= 4);
  CHECK(std::abs(phi.fitted_exponent - 2.0) < 0.3);
  for (const auto& p : phi.grid) {
    // Phi_1(delta) = 3 delta^2 / pi for delta <= 1 at d = 2.
    const double exact = 3.0 * p.x * p.x / std::numbers::pi;
    CHECK(std::abs(p.estimate - exact) < 5.0 * p.standard_error + 1e-12);
  }
  EstimateOptions jobs;
  jobs.jobs = 3;
  const ExperimentReport again = estimate_phi(2, 1, deltas, 40000, 11, jobs);
  CHECK(again.to_json() == phi.to_json());

  const TailReport tail = estimate_tail(2, 2, deltas, 20000, 5);
  CHECK(tail.sandwich_violations == 0);
  CHECK(tail.implication_violations == 0);
  CHECK(tail.ks_distance <= tail.ks_threshold);
  CHECK(tail.to_json().contains("primal"));
  CHECK(phi.to_csv().find("estimate") != std::string::npos);
}
