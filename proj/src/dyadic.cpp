#include "rtd/dyadic.hpp"

#include <bit>
#include <cmath>

namespace rtd {

namespace {

unsigned ctz128(u128 v) {
  const auto lo = static_cast<std::uint64_t>(v);
  if (lo != 0) return static_cast<unsigned>(std::countr_zero(lo));
  return 64 + static_cast<unsigned>(std::countr_zero(static_cast<std::uint64_t>(v >> 64)));
}

}  // namespace

std::uint64_t reverse_bits(std::uint64_t v, unsigned bits) {
  v = ((v >> 1) & 0x5555555555555555ULL) | ((v & 0x5555555555555555ULL) << 1);
  v = ((v >> 2) & 0x3333333333333333ULL) | ((v & 0x3333333333333333ULL) << 2);
  v = ((v >> 4) & 0x0F0F0F0F0F0F0F0FULL) | ((v & 0x0F0F0F0F0F0F0F0FULL) << 4);
  v = __builtin_bswap64(v);
  return bits == 0 ? 0 : v >> (64 - bits);
}

u128 reverse_bits128(u128 v, unsigned bits) {
  const u128 full = (static_cast<u128>(reverse_bits(static_cast<std::uint64_t>(v), 64)) << 64) |
                    reverse_bits(static_cast<std::uint64_t>(v >> 64), 64);
  return bits == 0 ? 0 : full >> (128 - bits);
}

DyadicPoint::DyadicPoint(u128 numerator, unsigned level) {
  if (level > kMaxLevel) throw DomainError("dyadic level exceeds supported precision");
  if (numerator > (static_cast<u128>(1) << level)) throw DomainError("dyadic point outside [0,1]");
  if (numerator == 0) {
    level = 0;
  } else {
    const unsigned tz = std::min(ctz128(numerator), level);
    numerator >>= tz;
    level -= tz;
  }
  numerator_ = numerator;
  level_ = level;
}

DyadicPoint DyadicPoint::from_double(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("dyadic point outside [0,1]");
  if (x == 0.0) return DyadicPoint();
  int e = 0;
  const double m = std::frexp(x, &e);  // x = m 2^e, m in [0.5, 1)
  const auto mant = static_cast<std::uint64_t>(std::ldexp(m, 53));
  const int level = 53 - e;
  if (level < 0) throw DomainError("dyadic point outside [0,1]");
  u128 num = mant;
  unsigned lv = static_cast<unsigned>(level);
  const unsigned tz = std::min(ctz128(num), lv);
  num >>= tz;
  lv -= tz;
  if (lv > kMaxLevel) throw DomainError("double too fine for exact dyadic representation");
  return DyadicPoint(num, lv);
}

u128 DyadicPoint::numerator_at(unsigned level) const {
  if (level < level_ || level > kMaxLevel) throw DomainError("cannot express dyadic at coarser level");
  return numerator_ << (level - level_);
}

double DyadicPoint::to_double() const {
  return std::ldexp(static_cast<double>(numerator_), -static_cast<int>(level_));
}

std::strong_ordering operator<=>(const DyadicPoint& a, const DyadicPoint& b) {
  const unsigned lv = std::max(a.level_, b.level_);
  const u128 x = a.numerator_at(lv);
  const u128 y = b.numerator_at(lv);
  if (x < y) return std::strong_ordering::less;
  if (x > y) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

DyadicWord::DyadicWord(std::uint64_t index, unsigned length) : index_(index), length_(length) {
  if (length < 1 || length > kMaxLength) throw DomainError("word length must be in [1, 63]");
  if (index >> length) throw DomainError("word index does not fit its length");
}

DyadicWord DyadicWord::from_bits(const std::vector<int>& bits) {
  if (bits.empty() || bits.size() > kMaxLength) throw DomainError("word length must be in [1, 63]");
  std::uint64_t j = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw DomainError("binary digit expected");
    j = (j << 1) | static_cast<std::uint64_t>(b);
  }
  return DyadicWord(j, static_cast<unsigned>(bits.size()));
}

DyadicWord DyadicWord::from_string(const std::string& bits) {
  std::vector<int> v;
  v.reserve(bits.size());
  for (char ch : bits) v.push_back(ch == '1' ? 1 : (ch == '0' ? 0 : -1));
  return from_bits(v);
}

int DyadicWord::bit(unsigned i) const {
  if (i < 1 || i > length_) throw DomainError("digit position out of range");
  return static_cast<int>((index_ >> (length_ - i)) & 1U);
}

unsigned DyadicWord::first_zero() const {
  const std::uint64_t top = index_ << (64 - length_);
  const auto ones = static_cast<unsigned>(std::countl_one(top));
  return std::min(ones, length_) + 1;
}

std::string DyadicWord::to_string() const {
  std::string s;
  for (unsigned i = 1; i <= length_; ++i) s.push_back(bit(i) ? '1' : '0');
  return s;
}

}  // namespace rtd
