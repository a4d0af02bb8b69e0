#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace minklab {

struct GridPoint {
  double x = 0.0;
  double estimate = 0.0;
  double standard_error = 0.0;
  double effective_hits = 0.0;
  bool insufficient_mass = false;
  bool in_fit = false;
};

struct ExperimentReport {
  std::string quantity;
  std::vector<GridPoint> grid;
  double fitted_exponent = 0.0;
  double fit_stderr = 0.0;
  int fit_points = 0;
  std::pair<double, double> fit_window{0.05, 0.3};
  std::uint64_t seed = 0;
  long sample_count = 0;
  nlohmann::json extra = nlohmann::json::object();

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

}  // namespace minklab
