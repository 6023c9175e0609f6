#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace rtd {

using u128 = unsigned __int128;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// bad parameter (p >= -1, non-dyadic origin, q out of range, ...)
class DomainError : public Error {
 public:
  using Error::Error;
};

// point sits on a measure-zero partition boundary; caller should resample
class BoundaryPoint : public Error {
 public:
  using Error::Error;
};

// requested enumeration exceeds the configured budget
class ResourceError : public Error {
 public:
  using Error::Error;
};

class RejectionStall : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class AllDivergent : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A real number or the +inf marker. Kept distinct from IEEE infinity so that
// serialization is explicit ("inf") and arithmetic never silently propagates it.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr explicit ExtendedReal(double v) : value_(v) {}
  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }
  // +inf as a double when infinite; callers comparing values may rely on it
  double value() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

// Subinterval of [0,1] with explicit endpoint closedness.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool closed_lo = true;
  bool closed_hi = false;

  static Interval half_open(double lo, double hi) { return {lo, hi, true, false}; }
  static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
  static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }

  bool contains(double x) const {
    const bool above = closed_lo ? x >= lo : x > lo;
    const bool below = closed_hi ? x <= hi : x < hi;
    return above && below;
  }
  double length() const { return hi > lo ? hi - lo : 0.0; }
  bool empty() const { return !(hi > lo); }
  Interval clipped() const {
    Interval r = *this;
    if (r.lo < 0.0) {
      r.lo = 0.0;
      r.closed_lo = true;
    }
    if (r.hi > 1.0) {
      r.hi = 1.0;
      r.closed_hi = true;
    }
    return r;
  }
};

// First-return result: either an observed time tau >= 1 or censored at cap.
class ReturnOutcome {
 public:
  ReturnOutcome() = default;
  static ReturnOutcome returned(std::uint64_t tau) {
    if (tau == 0) throw std::invalid_argument("return time must be >= 1");
    return ReturnOutcome(tau, false);
  }
  static ReturnOutcome censored(std::uint64_t cap) { return ReturnOutcome(cap, true); }

  bool is_censored() const { return censored_; }
  // tau when returned, the cap when censored
  std::uint64_t time() const { return time_; }

  friend bool operator==(const ReturnOutcome&, const ReturnOutcome&) = default;

 private:
  ReturnOutcome(std::uint64_t t, bool c) : time_(t), censored_(c) {}
  std::uint64_t time_ = 1;
  bool censored_ = false;
};

}  // namespace rtd
