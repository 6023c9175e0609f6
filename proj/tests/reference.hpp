#pragma once

// Test-side oracles. Nothing here calls into the library: each quantity is
// recomputed from its definition with plain integer or quadrature arithmetic.

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>

namespace ref {

// low `bits` bits of v in reverse order, one bit at a time
inline std::uint64_t reverse(std::uint64_t v, unsigned bits) {
  std::uint64_t r = 0;
  for (unsigned i = 0; i < bits; ++i) r |= ((v >> i) & 1u) << (bits - 1 - i);
  return r;
}

// vN-K on order-n interval indices: add one to the digit string read
// least-significant-first (the first binary digit is the least significant)
inline std::uint64_t vnk_index_step(std::uint64_t j, unsigned n) {
  const std::uint64_t mask = (n == 64) ? ~0ull : ((1ull << n) - 1);
  return reverse((reverse(j, n) + 1) & mask, n);
}

// vN-K on a real: J_k = [1 - 2^-k, 1 - 2^-(k+1)) is shifted onto [2^-(k+1), 2^-k)
inline double vnk_map(double x) {
  if (x == 1.0) return 0.0;
  int k = 0;
  while (x >= 1.0 - std::ldexp(1.0, -(k + 1))) ++k;
  return x - (1.0 - std::ldexp(1.0, -k)) + std::ldexp(1.0, -(k + 1));
}

// enlarged-box first-return counts: for every index j, the first m >= 1 with
// the orbit of A_j inside {j-1, j, j+1}; counted by m
inline std::map<std::uint64_t, std::uint64_t> rho_by_walking(unsigned n) {
  const std::uint64_t size = 1ull << n;
  std::map<std::uint64_t, std::uint64_t> out;
  for (std::uint64_t j = 0; j < size; ++j) {
    std::uint64_t i = j;
    for (std::uint64_t m = 1;; ++m) {
      i = vnk_index_step(i, n);
      const auto d = static_cast<std::int64_t>(i) - static_cast<std::int64_t>(j);
      if (d >= -1 && d <= 1) {
        ++out[m];
        break;
      }
    }
  }
  return out;
}

// normalization of the Gaspard-Wang invariant measure
inline double gw_a(double p) { return 1.0 / boost::math::zeta(-p); }

// composite Simpson rule with n (even) panels
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Gamma_mu for Lebesgue measure: integral over x of mu(B_eps(x))^(q-1), or of log mu
inline double lebesgue_gamma_mu(double eps, double q, bool log_variant) {
  const auto mass = [eps](double x) { return std::min(x + eps, 1.0) - std::max(x - eps, 0.0); };
  const auto f = [&](double x) { return log_variant ? std::log(mass(x)) : std::pow(mass(x), q - 1.0); };
  // split at the kinks so each panel is smooth
  const double k1 = std::min(eps, 1.0);
  const double k2 = std::max(1.0 - eps, k1);
  return simpson(f, 0.0, k1) + (k2 > k1 ? simpson(f, k1, k2) : 0.0) + simpson(f, k2, 1.0);
}

// least-squares slope of y against x
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ref
