#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rtd/grid.hpp"
#include "rtd/kernels.hpp"
#include "rtd/maps.hpp"
#include "rtd/types.hpp"

namespace rtd {

// kAuto picks the exact path where one exists (vN-K dyadic grids, Lebesgue
// ball measures) and Monte Carlo otherwise.
enum class EvalMode { kAuto, kMonteCarlo, kExact };

// Monte Carlo controls shared by every sampling estimator.
struct McOptions {
  std::uint64_t samples = 100000;
  std::uint64_t cap = 1000000;
  std::uint64_t seed = 1;
  ExecPolicy policy = ExecPolicy::kParallel;
  EvalMode mode = EvalMode::kAuto;
  // a batch whose censored fraction exceeds this raises a cap-too-small warning
  double censor_warn_threshold = 0.01;
  std::function<void(const std::string&)> warn;
};

// Empirical (or exact) law nu^A of the first return time to A.
struct ReturnDistribution {
  std::map<std::uint64_t, double> mass;
  double censored_mass = 0.0;
  std::uint64_t sample_count = 0;  // 0 for exact distributions
  double target_set_measure = 0.0;
  std::uint64_t cap = 0;

  bool exact() const { return sample_count == 0; }
  double total() const;
};

struct MomentOrder {
  bool log = false;
  double s = 1.0;
  static MomentOrder power(double s) { return {false, s}; }
  static MomentOrder log_tag() { return {true, 0.0}; }
};

struct MomentValue {
  MomentOrder order;
  ExtendedReal value;
  // contribution-inclusive value assuming every censored return happened at cap
  double lower_bound_from_censoring = 0.0;
  bool is_lower_bound = false;
  double std_error = 0.0;
};

struct KacResidual {
  double residual = 0.0;  // nu_1 - 1/mu(A)
  double std_error = 0.0;
};

struct MomentCheck {
  std::string relation;
  double s = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // signed slack of the inequality (>= 0 when it holds)
  double tolerance = 0.0;
  bool holds = true;
  bool skipped = false;
};

struct MomentReport {
  std::vector<MomentCheck> checks;
  bool all_hold() const;
  // checks that hold with |margin| <= tolerance, i.e. as equalities
  bool all_equalities() const;
};

// smallest n <= cap with T^n(x) in set (x must lie in set)
ReturnOutcome first_return_time(double x, const Interval& set, const DynamicalSystem& sys,
                                std::uint64_t cap);
// first return of x in A_j to the enlarged box around A_j
ReturnOutcome first_return_to_enlarged(double x, const GridSpec& grid, const DynamicalSystem& sys,
                                       std::uint64_t cap);

ReturnDistribution estimate_return_distribution(const Interval& set, const DynamicalSystem& sys,
                                                const McOptions& opts);

// vN-K dyadic interval A^n_j: point mass at its exact return time, obtained by
// walking the index permutation
ReturnDistribution vnk_dyadic_box_distribution(unsigned n, std::uint64_t j);
// exact return time of every A^n_j to itself, literal permutation iteration
std::vector<std::uint64_t> vnk_box_return_times(unsigned n, ExecPolicy policy);

// GW, A = I_0: nu({j+1}) = l_j, truncated after `terms` atoms (rest censored)
ReturnDistribution gw_i0_distribution(const GaspardWang& map, std::uint64_t terms);

MomentValue moment(const ReturnDistribution& dist, MomentOrder order);
KacResidual kac_residual(const ReturnDistribution& dist);
MomentReport check_moment_inequalities(const ReturnDistribution& dist, std::span<const double> s_list);

}  // namespace rtd
