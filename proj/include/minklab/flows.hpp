#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "minklab/lattice.hpp"
#include "minklab/report.hpp"

namespace minklab {

enum class FlowKind { diagonal, unipotent };

/// One-parameter subgroup exp(t z) (diagonal, sum z = 0) or exp(t N)
/// (N strictly upper triangular).
struct FlowSpec {
  FlowKind kind = FlowKind::diagonal;
  Vector z;
  Matrix nilpotent;

  static FlowSpec diagonal(Vector z);
  static FlowSpec unipotent(Matrix n);

  int dim() const;
  void validate() const;
  /// exp(t * generator).
  Matrix matrix(double t) const;
  /// Largest single step for which the matrix is applied directly.
  double max_direct_step() const;
};

/// flow_t * basis. Long times are split into steps with LLL rebasing in
/// between, so the result is a reduced basis of the same lattice.
LatticeBasis apply_flow(const FlowSpec& spec, double t, const LatticeBasis& basis);

/// Follows flow_t * L forward in time, keeping an LLL-reduced basis.
class OrbitWalker {
 public:
  OrbitWalker(FlowSpec spec, const LatticeBasis& start);

  const LatticeBasis& advance_to(double t);
  const LatticeBasis& current() const { return current_; }
  double time() const { return time_; }

 private:
  FlowSpec spec_;
  LatticeBasis current_;
  double time_ = 0.0;
};

inline constexpr double kGridRatio = 1.05;

/// `points` times ending at t_max with constant ratio kGridRatio.
std::vector<double> geometric_grid(double t_max, int points, double ratio = kGridRatio);

struct LogLawTrace {
  std::vector<double> times;
  std::vector<double> delta_values;   // -log lambda_i
  std::vector<double> running_ratio;  // max_{s <= t} delta_i(s) / log s
};

LogLawTrace log_law_trace(const FlowSpec& spec, const LatticeBasis& basis, int i, double t_max,
                          int grid);

struct SeededTrace {
  std::uint64_t seed;
  LogLawTrace trace;
};

/// Traces for `seeds` Haar-random lattices (d in {2,3}).
std::vector<SeededTrace> log_law_ensemble(const FlowSpec& spec, int i, double t_max, int grid,
                                          int seeds, std::uint64_t seed, int jobs = 1);

struct BorelCantelliReport {
  std::vector<double> t_maxes;
  std::vector<std::vector<double>> violation_fractions;  // [seed][t_max]
  std::vector<double> mean_fraction;                     // per t_max
  double nonincreasing_share = 0.0;

  nlohmann::json to_json() const;
};

/// Fraction of integer times t in [t_max/2, t_max] with
/// delta_i(flow_t L) > (1/(d i) + epsilon) log t, per seed and t_max.
BorelCantelliReport borel_cantelli_upper_check(const FlowSpec& spec, int d, int i,
                                               double epsilon, int seeds, std::uint64_t seed,
                                               std::vector<double> t_maxes = {1e2, 1e3, 1e4},
                                               int jobs = 1);

/// First m in 1..m_max with lambda_i(flow_m L) <= level.
std::optional<long> hitting_time(const FlowSpec& spec, const LatticeBasis& basis, int i,
                                 double level, long m_max);

struct HittingTimeReport {
  std::vector<double> levels;           // t, with target level exp(-t)
  std::vector<double> mean_log_time;    // over seeds
  std::vector<long> censored;           // seeds with no hit before m_max
  double slope = 0.0;
  double slope_stderr = 0.0;
  std::uint64_t seed = 0;
  int seeds = 0;

  nlohmann::json to_json() const;
};

/// Regress mean log(hitting time of {lambda_i <= e^{-t}}) on t.
HittingTimeReport hitting_time_regression(const FlowSpec& spec, int i,
                                          const std::vector<double>& levels, int seeds,
                                          std::uint64_t seed, long m_max, int jobs = 1);

}  // namespace minklab
