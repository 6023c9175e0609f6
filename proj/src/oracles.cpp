#include "rtd/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "rtd/grid.hpp"
#include "rtd/maps.hpp"
#include "rtd/scaling.hpp"

namespace rtd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Branch branch(double lo, bool lo_closed, double hi, bool hi_closed, std::string formula,
              std::function<ExtendedReal(double)> fn) {
  Branch b;
  b.lo = lo;
  b.hi = hi;
  b.lo_closed = lo_closed;
  b.hi_closed = hi_closed;
  b.formula = std::move(formula);
  b.value = std::move(fn);
  return b;
}

ExtendedReal finite(double v) { return ExtendedReal(v); }

}  // namespace

std::string reference_system_name(ReferenceSystem s) {
  switch (s) {
    case ReferenceSystem::VonNeumannKakutani: return "vnk";
    case ReferenceSystem::GaspardWang: return "gw";
    case ReferenceSystem::Lebesgue: return "lebesgue";
  }
  return "?";
}

std::string quantity_name(Quantity q) {
  switch (q) {
    case Quantity::D_mu: return "D_mu";
    case Quantity::D_tau: return "D_tau";
    case Quantity::Delta_tau_grid: return "Delta_tau_grid";
    case Quantity::rho_table: return "rho_table";
    case Quantity::q_critical: return "q_critical";
  }
  return "?";
}

bool Branch::contains(double x) const {
  const bool above = lo_closed ? x >= lo : x > lo;
  const bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

ExtendedReal TheoremReference::evaluate(double x) const {
  for (const auto& b : branches) {
    if (b.contains(x)) return b.value(x);
  }
  throw DomainError(id + ": argument outside the declared domain");
}

std::vector<double> TheoremReference::boundaries() const {
  std::vector<double> out;
  for (const auto& b : branches) {
    if (std::isfinite(b.lo)) out.push_back(b.lo);
    if (std::isfinite(b.hi)) out.push_back(b.hi);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool TheoremReference::covers_domain() const {
  if (branches.empty()) return false;
  std::vector<Branch> s = branches;
  std::sort(s.begin(), s.end(), [](const Branch& a, const Branch& b) { return a.lo < b.lo; });
  if (s.front().lo != domain_lo || s.back().hi != domain_hi) return false;
  if (std::isfinite(domain_lo) && !s.front().lo_closed) return false;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    // adjacent branches must meet, and the junction must belong to one of them
    if (s[i].hi != s[i + 1].lo) return false;
    if (!s[i].hi_closed && !s[i + 1].lo_closed) return false;
  }
  return true;
}

std::vector<TheoremReference> theorem_references(double p) {
  if (!(p < -1.0)) throw DomainError("Gaspard-Wang exponent must satisfy p < -1");
  std::vector<TheoremReference> refs;

  TheoremReference vnk_tau{"vnk-dtau", ReferenceSystem::VonNeumannKakutani, Quantity::D_tau, -kInf, kInf, {}};
  vnk_tau.branches.push_back(branch(-kInf, false, 2.0, true, "1", [](double) { return finite(1.0); }));
  vnk_tau.branches.push_back(
      branch(2.0, false, kInf, false, "1/(q-1)", [](double q) { return finite(1.0 / (q - 1.0)); }));
  refs.push_back(vnk_tau);

  TheoremReference vnk_mu{"vnk-dmu", ReferenceSystem::VonNeumannKakutani, Quantity::D_mu, -kInf, kInf, {}};
  vnk_mu.branches.push_back(branch(-kInf, false, kInf, false, "1", [](double) { return finite(1.0); }));
  refs.push_back(vnk_mu);

  TheoremReference vnk_grid{"vnk-grid-box", ReferenceSystem::VonNeumannKakutani, Quantity::Delta_tau_grid,
                            -kInf, kInf, {}};
  vnk_grid.branches.push_back(branch(-kInf, false, 0.0, true, "1 (liminf)", [](double) { return finite(1.0); }));
  vnk_grid.branches.push_back(branch(0.0, true, kInf, false, "1 (limsup)", [](double) { return finite(1.0); }));
  refs.push_back(vnk_grid);

  TheoremReference vnk_rho{"vnk-rho", ReferenceSystem::VonNeumannKakutani, Quantity::rho_table, 3.0,
                           static_cast<double>(kRhoTableMax), {}};
  vnk_rho.branches.push_back(branch(3.0, true, static_cast<double>(kRhoTableMax), true, "sum_m rho = 2^n",
                                    [](double n) { return finite(std::ldexp(1.0, static_cast<int>(n))); }));
  refs.push_back(vnk_rho);

  TheoremReference gw_mu{"gw-dmu", ReferenceSystem::GaspardWang, Quantity::D_mu, -kInf, kInf, {}};
  gw_mu.branches.push_back(branch(-kInf, false, -p, true, "1", [](double) { return finite(1.0); }));
  gw_mu.branches.push_back(branch(-p, false, kInf, false, "(1+1/p) q/(q-1)",
                                  [p](double q) { return finite((1.0 + 1.0 / p) * q / (q - 1.0)); }));
  refs.push_back(gw_mu);

  TheoremReference gw_tau{"gw-dtau", ReferenceSystem::GaspardWang, Quantity::D_tau, -kInf, p + 1.0, {}};
  gw_tau.branches.push_back(
      branch(-kInf, false, p + 1.0, false, "inf", [](double) { return ExtendedReal::infinity(); }));
  refs.push_back(gw_tau);

  TheoremReference gw_qc{"gw-qc", ReferenceSystem::GaspardWang, Quantity::q_critical, -kInf, kInf, {}};
  gw_qc.branches.push_back(branch(-kInf, false, kInf, false, "p+1", [p](double) { return finite(p + 1.0); }));
  refs.push_back(gw_qc);

  TheoremReference leb_mu{"lebesgue-dmu", ReferenceSystem::Lebesgue, Quantity::D_mu, -kInf, kInf, {}};
  leb_mu.branches.push_back(branch(-kInf, false, kInf, false, "1", [](double) { return finite(1.0); }));
  refs.push_back(leb_mu);

  TheoremReference leb_plus{"lebesgue-delta-plus", ReferenceSystem::Lebesgue, Quantity::D_mu, -kInf, kInf, {}};
  leb_plus.branches.push_back(
      branch(-kInf, false, 0.0, false, "inf", [](double) { return ExtendedReal::infinity(); }));
  leb_plus.branches.push_back(branch(0.0, true, kInf, false, "1", [](double) { return finite(1.0); }));
  refs.push_back(leb_plus);
  return refs;
}

ExtendedReal lebesgue_dimensions(double q, LebesgueQuantity which) {
  if (which == LebesgueQuantity::Delta_plus_mu && q < 0.0) return ExtendedReal::infinity();
  return ExtendedReal(1.0);
}

GridClaim vnk_grid_dimension_claims(double q, double theta) {
  if (!(theta >= 0.0 && theta < 1.0)) throw DomainError("grid origin must lie in [0,1)");
  bool dyadic = false;
  for (int m = 0; m <= 40 && !dyadic; ++m) {
    const double s = std::ldexp(theta, m);
    dyadic = s == std::floor(s);
  }
  if (!dyadic) throw DomainError("grid origin must have the form k 2^-m");
  GridClaim c;
  if (q >= 0.0) c.delta_plus = 1.0;
  if (q <= 0.0) c.delta_minus = 1.0;
  return c;
}

MomentSum gw_moment_sum(double q, double p, std::uint64_t truncation) {
  if (truncation < 1) throw DomainError("truncation must be >= 1");
  if (!std::isfinite(q)) throw DomainError("q must be finite");
  const GaspardWang map(p);
  MomentSum r;
  r.q = q;
  r.p = p;
  r.truncation = truncation;
  // range sums are kept separate so small increments survive rounding
  const auto range_sum = [&](std::uint64_t lo, std::uint64_t hi) {
    long double sum = 0.0L;
    for (std::uint64_t j = lo; j < hi; ++j) {
      sum += std::pow(static_cast<long double>(j + 1), static_cast<long double>(1.0 - q)) *
             static_cast<long double>(map.length(static_cast<std::int64_t>(j)));
    }
    return sum;
  };
  const long double head = range_sum(0, truncation);
  const long double inc1 = range_sum(truncation, 2 * truncation);
  const long double inc2 = range_sum(2 * truncation, 4 * truncation);
  r.s1 = static_cast<double>(head);
  r.s2 = static_cast<double>(head + inc1);
  r.s4 = static_cast<double>(head + inc1 + inc2);
  const double d1 = static_cast<double>(inc1);
  const double d2 = static_cast<double>(inc2);
  r.ratio = d1 > 0.0 ? d2 / d1 : 0.0;
  r.divergent = r.ratio > kMomentRatioThreshold;
  if (!r.divergent && r.ratio > 0.0) r.tail_bound = d2 * r.ratio / (1.0 - r.ratio);
  if (r.divergent) r.tail_bound = kInf;
  return r;
}

}  // namespace rtd
