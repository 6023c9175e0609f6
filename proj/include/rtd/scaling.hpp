#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rtd/kernels.hpp"
#include "rtd/partition.hpp"
#include "rtd/types.hpp"

namespace rtd {

// two-point slope spread above this marks a fit as non-convergent
inline constexpr double kNonconvergentSpread = 0.2;
// floor for audit tolerances on fitted dimensions
inline constexpr double kAuditToleranceFloor = 0.05;

struct DimensionEstimate {
  Family family = Family::GammaMu;
  Variant variant = Variant::kPower;
  double theta = 0.0;
  double q = 0.0;
  ExtendedReal slope;  // +inf when divergent
  double intercept = 0.0;
  double residual_rms = 0.0;  // in dimension units
  double slope_se = 0.0;
  double eps_min = 0.0;
  double eps_max = 0.0;
  std::size_t points = 0;
  bool divergent = false;
  double spread = 0.0;  // max minus min of two-point slopes
  bool nonconvergent() const { return spread > kNonconvergentSpread; }
};

struct FitOptions {
  // the largest eps is a transient and is left out of the regression
  bool drop_largest = true;
};

// Least-squares fit of log value (power) or value (log family) against log eps.
// Samples must share family; those with a different q are ignored.
DimensionEstimate fit_dimension(std::span<const PartitionSample> samples, double q, const FitOptions& opts = {});

// Fits every (family, theta, q) group in a partition table. Groups divergent
// throughout become +inf estimates; groups that cannot be fitted are reported
// through `skipped` with the reason.
struct FitFailure {
  Family family;
  double theta;
  double q;
  std::string reason;
};
std::vector<DimensionEstimate> fit_table(std::span<const PartitionSample> table, const FitOptions& opts,
                                         std::vector<FitFailure>* skipped = nullptr);

const DimensionEstimate* find_estimate(std::span<const DimensionEstimate> table, Family f, double q);

// closed-form spectra of the two reference maps
double vnk_exact_dimensions(double q);
double gw_exact_mu_dimensions(double q, double p);
double gw_critical_q(double p);

using RhoTable = std::map<std::uint64_t, std::uint64_t>;
inline constexpr unsigned kRhoTableMax = 62;
inline constexpr unsigned kRhoBruteforceMax = 16;
// enlarged-box first-return counts on the order-n dyadic partition
RhoTable vnk_rho_table(unsigned n);
// same counts by iterating the symbolic permutation from every index
RhoTable vnk_rho_bruteforce(unsigned n, ExecPolicy policy = ExecPolicy::kParallel);

enum class Verdict { kHolds, kViolated, kInconclusive };
std::string verdict_name(Verdict v);

struct InequalityAudit {
  std::string relation;
  double q = 0.0;
  double eps_min = 0.0;
  double eps_max = 0.0;
  ExtendedReal left;
  ExtendedReal right;
  double margin = 0.0;  // signed slack, >= 0 when the relation holds exactly
  double tolerance = 0.0;
  Verdict verdict = Verdict::kInconclusive;
};

// Chains linking D_tau (gamma_tau), Delta_tau (upsilon_tau), Delta_mu
// (upsilon_mu) and D_mu (gamma_mu) at every q present in the table.
std::vector<InequalityAudit> audit_main_theorem(std::span<const DimensionEstimate> estimates);

struct ShortReturnEntry {
  double q = 0.0;
  double bound = 0.0;  // delta / (q - 1)
  std::optional<double> d_tau;
  bool holds = true;
};
struct ShortReturnReport {
  std::uint64_t k = 0;
  double delta = 0.0;
  double delta_se = 0.0;
  double intercept = 0.0;
  std::vector<ShortReturnEntry> entries;
};
// R(eps; k) ~ C eps^delta fitted over the profiles; D_tau(q) <= delta/(q-1) + slack for q > 1
ShortReturnReport short_return_bound(std::span<const ReturnProfile> profiles, std::uint64_t k,
                                     std::span<const double> q_list,
                                     std::span<const DimensionEstimate> d_tau = {}, double slack = 0.1);

struct ShapeReport {
  bool monotone = true;
  bool concave = true;
  std::vector<std::string> notes;
};
// non-increasing D(q) and concave (q-1) D(q) on each side of q = 1, within `tolerance`
ShapeReport convexity_monotonicity_check(std::span<const DimensionEstimate> spectrum, double tolerance = 0.05);

struct ConjectureLine {
  double q = 0.0;
  std::string clause;  // "dtau=dmu" on (q_c, 2], "dtau=dmu2/(q-1)" on q >= 2
  ExtendedReal d_tau;
  double predicted = 0.0;
  bool match = false;
};
// exploratory only: no pass/fail semantics
std::vector<ConjectureLine> conjecture_probe(std::span<const DimensionEstimate> d_tau,
                                             std::span<const DimensionEstimate> d_mu, double q_c,
                                             double tolerance = 0.1);

}  // namespace rtd
