#include "minklab/report.hpp"

#include <cmath>
#include <sstream>

namespace minklab {

namespace {

nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : grid) {
    rows.push_back({{"x", p.x},
                    {"estimate", p.estimate},
                    {"stderr", p.standard_error},
                    {"effective_hits", p.effective_hits},
                    {"insufficient_mass", p.insufficient_mass},
                    {"in_fit", p.in_fit}});
  }
  return {{"quantity", quantity},
          {"grid", std::move(rows)},
          {"fitted_exponent", finite_or_null(fitted_exponent)},
          {"fit_stderr", finite_or_null(fit_stderr)},
          {"fit_points", fit_points},
          {"fit_window", {fit_window.first, fit_window.second}},
          {"seed", seed},
          {"sample_count", sample_count},
          {"extra", extra}};
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "x,estimate,stderr,effective_hits,insufficient_mass,in_fit\n";
  for (const auto& p : grid) {
    out << p.x << ',' << p.estimate << ',' << p.standard_error << ',' << p.effective_hits << ','
        << (p.insufficient_mass ? 1 : 0) << ',' << (p.in_fit ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace minklab
