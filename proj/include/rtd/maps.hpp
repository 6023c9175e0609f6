#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rtd/dyadic.hpp"
#include "rtd/kernels.hpp"
#include "rtd/types.hpp"

namespace rtd {

struct SamplingLimits {
  // rejection sampling gives up below this acceptance rate
  double acceptance_floor = 1e-4;
  std::uint64_t min_attempts = 10000;
};

// Abstract interval map on [0,1] with its invariant probability measure.
class DynamicalSystem {
 public:
  virtual ~DynamicalSystem() = default;

  virtual std::string name() const = 0;
  virtual double apply(double x) const = 0;
  // mu([u,v]) for 0 <= u <= v <= 1 (endpoints carry no mass)
  virtual double measure_of_interval(double u, double v) const = 0;
  virtual double sample_invariant(Rng& rng) const = 0;
  // true when the invariant measure is Lebesgue measure
  virtual bool lebesgue_invariant() const { return false; }

  // x ~ mu conditioned on `set`; default is rejection from sample_invariant
  virtual double sample_conditional(Rng& rng, const Interval& set,
                                    const SamplingLimits& limits = {}) const;

  // smallest n in [1, cap] with T^n(x) in target, else censored. The default
  // iterates apply(); systems override with exact or accelerated engines.
  virtual ReturnOutcome first_entry(double x, const Interval& target, std::uint64_t cap) const;
  // first return of x to the open ball (x - eps, x + eps)
  virtual ReturnOutcome first_return_to_ball(double x, double eps, std::uint64_t cap) const;

  // step-by-step orbit iteration; the serial reference for first_entry
  ReturnOutcome orbit_first_entry(double x, const Interval& target, std::uint64_t cap) const;
};

// ---------------------------------------------------------------------------
// von Neumann-Kakutani map: J_k = [1 - 2^-k, 1 - 2^-k-1) is translated onto
// [2^-k-1, 2^-k). On binary digits it flips everything up to and including the
// first zero, i.e. it adds one to the digit string read least-significant-first.

class VonNeumannKakutani final : public DynamicalSystem {
 public:
  // fixed-point width of the exact orbit engine
  static constexpr unsigned kWordBits = 120;

  std::string name() const override { return "vnk"; }
  double apply(double x) const override;
  DyadicPoint apply(const DyadicPoint& x) const;
  double measure_of_interval(double u, double v) const override;
  // odd multiple of 2^-53: never on a dyadic grid line of order <= 52
  double sample_invariant(Rng& rng) const override;
  bool lebesgue_invariant() const override { return true; }
  double sample_conditional(Rng& rng, const Interval& set,
                            const SamplingLimits& limits = {}) const override;

  // exact: digit-string arithmetic, O(word bits) per query independent of tau
  ReturnOutcome first_entry(double x, const Interval& target, std::uint64_t cap) const override;
  ReturnOutcome first_return_to_ball(double x, double eps, std::uint64_t cap) const override;

  // same semantics, literal iteration of the symbolic step (reference)
  ReturnOutcome symbolic_first_entry(double x, const Interval& target, std::uint64_t cap) const;
  ReturnOutcome symbolic_first_return_to_ball(double x, double eps, std::uint64_t cap) const;

  // index k of the interval J_k holding x in [0,1)
  static unsigned branch(double x);
};

DyadicPoint vnk_apply(const DyadicPoint& x);
double vnk_apply(double x);
DyadicWord vnk_symbolic_step(const DyadicWord& w);

struct CyclicCheck {
  bool cyclic = false;
  std::uint64_t period = 0;
};
// iterate the symbolic step from 0...0 and measure the period
CyclicCheck vnk_verify_cyclic(unsigned n, unsigned max_n = 20);

// ---------------------------------------------------------------------------
// Gaspard-Wang intermittent map with c_j = (j+1)^p, I_j = (c_{j+1}, c_j).

struct GwState {
  std::uint64_t j = 0;  // interval index
  double r = 0.5;       // relative position inside I_j, in (0,1)
};

class GaspardWang final : public DynamicalSystem {
 public:
  struct Options {
    double tail_tolerance = 1e-15;
  };

  explicit GaspardWang(double p) : GaspardWang(p, Options{}) {}
  GaspardWang(double p, Options options);

  std::string name() const override { return "gw"; }
  double p() const { return p_; }
  // normalization a = 1 / zeta(-p)
  double a() const { return a_; }
  std::uint64_t j_max() const { return j_max_; }

  double c(std::uint64_t j) const;
  // l_j = c_j - c_{j+1}, evaluated without cancellation; l_{-1} = 1
  double length(std::int64_t j) const;
  // sum_{i >= m} c_i
  double tail(std::uint64_t m) const;
  double interval_mass(std::uint64_t j) const { return a_ * c(j); }
  // K_j: the slice of I_0 whose points enter I_0 again after exactly j+1 steps
  Interval return_slice(std::uint64_t j) const;

  // throws BoundaryPoint when x sits on some c_j
  std::uint64_t locate(double x) const;
  GwState to_state(double x) const;
  double value(const GwState& s) const;
  GwState step(const GwState& s) const;

  double apply(double x) const override;
  double measure_of_interval(double u, double v) const override;
  double sample_invariant(Rng& rng) const override;
  GwState sample_state(Rng& rng) const;
  // exact conditional sampler by inversion of the distribution function
  double sample_conditional(Rng& rng, const Interval& set,
                            const SamplingLimits& limits = {}) const override;
  // laminar phases are skipped with a binary search over the monotone descent
  ReturnOutcome first_entry(double x, const Interval& target, std::uint64_t cap) const override;

  // one state step at a time (reference for first_entry)
  ReturnOutcome stepwise_first_entry(double x, const Interval& target, std::uint64_t cap) const;

  // mu([0, x])
  double cdf(double x) const;

 private:
  double inverse_cdf(double t) const;
  std::uint64_t locate_nothrow(double x) const;
  double tail_em(double n) const;

  double p_;
  double a_ = 0.0;
  std::uint64_t j_max_ = 0;
  Options options_;
  std::vector<double> c_table_;
  std::vector<double> len_table_;
  std::vector<double> tail_table_;
};

// ---------------------------------------------------------------------------
// Golden-mean rotation x -> x + (sqrt5 - 1)/2 mod 1: a uniquely ergodic map
// whose invariant measure is Lebesgue measure.

class GoldenRotation final : public DynamicalSystem {
 public:
  static constexpr double kAlpha = 0.6180339887498948482;
  std::string name() const override { return "lebesgue"; }
  double apply(double x) const override;
  double measure_of_interval(double u, double v) const override;
  double sample_invariant(Rng& rng) const override;
  bool lebesgue_invariant() const override { return true; }
  double sample_conditional(Rng& rng, const Interval& set,
                            const SamplingLimits& limits = {}) const override;
};

struct SystemSpec {
  std::string name = "vnk";
  double p = -1.5;
};

std::unique_ptr<DynamicalSystem> make_system(const SystemSpec& spec);

}  // namespace rtd
