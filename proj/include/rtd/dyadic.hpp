#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "rtd/types.hpp"

namespace rtd {

// Exact dyadic rational numerator / 2^level in [0,1], kept in canonical form
// (numerator odd, or level 0).
class DyadicPoint {
 public:
  static constexpr unsigned kMaxLevel = 124;

  DyadicPoint() = default;
  DyadicPoint(u128 numerator, unsigned level);

  // exact conversion; throws DomainError outside [0,1] or beyond kMaxLevel
  static DyadicPoint from_double(double x);

  u128 numerator() const { return numerator_; }
  unsigned level() const { return level_; }
  // numerator when written at a finer level (level >= this->level())
  u128 numerator_at(unsigned level) const;
  double to_double() const;

  friend bool operator==(const DyadicPoint&, const DyadicPoint&) = default;
  friend std::strong_ordering operator<=>(const DyadicPoint& a, const DyadicPoint& b);

 private:
  u128 numerator_ = 0;
  unsigned level_ = 0;
};

// Binary word sigma_1 ... sigma_n; index j = sum sigma_k 2^(n-k), so sigma_1 is
// the most significant bit and the word labels the dyadic interval [j 2^-n, (j+1) 2^-n).
class DyadicWord {
 public:
  static constexpr unsigned kMaxLength = 63;

  DyadicWord(std::uint64_t index, unsigned length);
  static DyadicWord from_bits(const std::vector<int>& bits);
  static DyadicWord from_string(const std::string& bits);

  std::uint64_t index() const { return index_; }
  unsigned length() const { return length_; }
  // sigma_i for 1 <= i <= n
  int bit(unsigned i) const;
  // first position holding a zero (1-based), length()+1 for the all-ones word
  unsigned first_zero() const;
  std::string to_string() const;

  friend bool operator==(const DyadicWord&, const DyadicWord&) = default;

 private:
  std::uint64_t index_;
  unsigned length_;
};

// reverse the low `bits` bits of v
std::uint64_t reverse_bits(std::uint64_t v, unsigned bits);
u128 reverse_bits128(u128 v, unsigned bits);

}  // namespace rtd
