#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rtd/kernels.hpp"
#include "rtd/types.hpp"

namespace rtd {

enum class ReferenceSystem { VonNeumannKakutani, GaspardWang, Lebesgue };
enum class Quantity { D_mu, D_tau, Delta_tau_grid, rho_table, q_critical };

std::string reference_system_name(ReferenceSystem s);
std::string quantity_name(Quantity q);

// one analytic branch on [lo, hi] (endpoints included per flag)
struct Branch {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;
  bool hi_closed = false;
  std::string formula;
  std::function<ExtendedReal(double)> value;
  bool contains(double x) const;
};

// A closed-form statement as data: a piecewise function of q (of n for the
// rho table) over a declared domain.
struct TheoremReference {
  std::string id;
  ReferenceSystem system = ReferenceSystem::Lebesgue;
  Quantity quantity = Quantity::D_mu;
  double domain_lo = -std::numeric_limits<double>::infinity();
  double domain_hi = std::numeric_limits<double>::infinity();
  std::vector<Branch> branches;

  // first branch containing x; DomainError outside the domain
  ExtendedReal evaluate(double x) const;
  // branch points sorted; consecutive branches leave no gap
  bool covers_domain() const;
  std::vector<double> boundaries() const;
};

std::vector<TheoremReference> theorem_references(double p = -1.5);

enum class LebesgueQuantity { D_mu, Delta_plus_mu };
ExtendedReal lebesgue_dimensions(double q, LebesgueQuantity which);

// Expected box dimensions of return times on a dyadic grid: the limsup holds
// for q >= 0, the liminf for q <= 0.
struct GridClaim {
  std::optional<double> delta_plus;
  std::optional<double> delta_minus;
};
GridClaim vnk_grid_dimension_claims(double q, double theta);

// Partial sums S(M) = sum_{j<M} (j+1)^(1-q) l_j of the I_0 return moment
// (normalized by mu(I_0)), examined at M, 2M and 4M.
struct MomentSum {
  double q = 0.0;
  double p = 0.0;
  std::uint64_t truncation = 0;
  double s1 = 0.0;  // S(M)
  double s2 = 0.0;  // S(2M)
  double s4 = 0.0;  // S(4M)
  double ratio = 0.0;  // (S(4M) - S(2M)) / (S(2M) - S(M))
  bool divergent = false;
  double tail_bound = 0.0;  // geometric extrapolation of the remainder
  double value() const { return s4 + tail_bound; }
};
// increments shrinking by less than this factor per doubling count as divergent
inline constexpr double kMomentRatioThreshold = 0.95;
MomentSum gw_moment_sum(double q, double p, std::uint64_t truncation = std::uint64_t{1} << 18);

// ---------------------------------------------------------------------------
// Oracle-vs-pipeline validation.

struct ValidationBudget {
  unsigned enum_max_n = 12;  // cyclic, Kac and rho enumerations run n <= this
  unsigned vnk_min_n = 6;    // return-time spectrum window 2^-min .. 2^-max
  unsigned vnk_max_n = 14;
  unsigned gw_mu_min_n = 5;  // measure spectrum window
  unsigned gw_mu_max_n = 13;
  unsigned gw_min_n = 4;     // main-theorem window for the Monte Carlo map
  unsigned gw_max_n = 12;
  std::uint64_t samples = 100000;
  std::uint64_t cap = 1000000;
  std::uint64_t seed = 1;
  double p = -1.5;
  std::set<std::string> systems = {"vnk", "gw", "lebesgue"};
  std::set<std::string> only;  // empty: every criterion
  bool corrupt_rho_table = false;  // fault injection for the rho comparison
  ExecPolicy policy = ExecPolicy::kParallel;

  static ValidationBudget zero();
  bool is_zero() const { return samples == 0; }
};

enum class Outcome { kPass, kFail, kSkipped, kInfo };
std::string outcome_name(Outcome o);

struct ValidationEntry {
  std::string id;
  bool probe = false;
  std::string expected;
  std::string observed;
  double tolerance = 0.0;
  Outcome outcome = Outcome::kSkipped;
  std::vector<std::string> details;
  double seconds = 0.0;
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;
  // every non-probe entry that ran passed
  bool all_pass() const;
  const ValidationEntry* find(const std::string& id) const;
};

const std::vector<std::string>& criterion_ids();
const std::vector<std::string>& probe_ids();

ValidationReport run_full_validation(const ValidationBudget& budget);

}  // namespace rtd
