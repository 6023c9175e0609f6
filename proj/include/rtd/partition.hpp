#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rtd/grid.hpp"
#include "rtd/maps.hpp"
#include "rtd/recurrence.hpp"
#include "rtd/types.hpp"

namespace rtd {

enum class Family { GammaMu, GammaTau, UpsilonMu, UpsilonTau, PhiMu, PsiMu, PsiTau, UpsilonTilde };
enum class Variant { kPower, kLog };

std::string family_name(Family f);
std::optional<Family> parse_family(const std::string& s);
std::string variant_name(Variant v);
std::optional<Variant> parse_variant(const std::string& s);
bool is_tau_family(Family f);

// power(q) or the logarithmic q = 1 variant
struct Order {
  Variant variant = Variant::kPower;
  double q = 0.0;
  static Order power(double q) { return {Variant::kPower, q}; }
  static Order log() { return {Variant::kLog, 1.0}; }
};

// Routes q = 1 to the log family, as used for dimension spectra.
std::vector<Order> spectrum_orders(std::span<const double> qs);

struct PartitionSample {
  Family family = Family::GammaMu;
  Variant variant = Variant::kPower;
  double theta = 0.0;
  double epsilon = 0.0;
  double q = 0.0;
  ExtendedReal value;
  double std_error = 0.0;  // Monte Carlo families only
  double censored_fraction = 0.0;
  bool divergent = false;
};

// Ball families (integrals over x ~ mu).
std::vector<PartitionSample> gamma_mu(double eps, std::span<const Order> orders,
                                      const DynamicalSystem& sys, const McOptions& opts);
std::vector<PartitionSample> gamma_tau(double eps, std::span<const Order> orders,
                                       const DynamicalSystem& sys, const McOptions& opts);

// Box families over a grid.
std::vector<PartitionSample> upsilon_mu(const GridSpec& grid, std::span<const Order> orders,
                                        const DynamicalSystem& sys);
std::vector<PartitionSample> upsilon_tau(const GridSpec& grid, std::span<const Order> orders,
                                         const DynamicalSystem& sys, const McOptions& opts);
std::vector<PartitionSample> phi_mu(const GridSpec& grid, std::span<const Order> orders,
                                    const DynamicalSystem& sys);
std::vector<PartitionSample> psi_mu(const GridSpec& grid, std::span<const Order> orders,
                                    const DynamicalSystem& sys);
std::vector<PartitionSample> psi_tau(const GridSpec& grid, std::span<const Order> orders,
                                     const DynamicalSystem& sys, const McOptions& opts);
// sum of upsilon_tau over the three shifted grids of side 3 eps
std::vector<PartitionSample> upsilon_tilde_tau(const GridSpec& grid, std::span<const Order> orders,
                                               const DynamicalSystem& sys, const McOptions& opts);

// single-order conveniences
PartitionSample gamma_mu(double eps, Order order, const DynamicalSystem& sys, const McOptions& opts);
PartitionSample gamma_tau(double eps, Order order, const DynamicalSystem& sys, const McOptions& opts);

// Evaluate `family` at one (grid, eps) cell for all orders.
std::vector<PartitionSample> evaluate_family(Family family, const GridSpec& grid,
                                             std::span<const Order> orders,
                                             const DynamicalSystem& sys, const McOptions& opts);

// Closed form of Gamma_mu for Lebesgue measure on [0,1] with clipped balls.
double lebesgue_gamma_mu(double eps, Order order);

// rho(eps; m) for m = 1..k_max and its running sum R(eps; k)
struct ReturnProfile {
  double epsilon = 0.0;
  std::vector<double> rho;         // rho[m-1]
  std::vector<double> cumulative;  // R(eps; m) = sum_{i <= m} rho(eps; i)
  double beyond = 0.0;             // mass with tau > k_max
  bool exact = false;
  double R(std::uint64_t k) const { return k == 0 ? 0.0 : cumulative.at(k - 1); }
};
ReturnProfile return_profile(double eps, const DynamicalSystem& sys, const McOptions& opts,
                             std::uint64_t k_max);

// Cap-doubling divergence test on per-sample return times (censored encoded as
// cap + 1), `stride` returns per sample summed. Only doublings at caps with
// 10 or more exceedances and at most 1% censoring are considered.
bool cap_doubling_divergent(std::span<const std::uint64_t> times, std::size_t stride, double q,
                            std::uint64_t cap);

}  // namespace rtd
