#include "rtd/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "rtd/maps.hpp"

namespace rtd {

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rss = 0.0;
  double slope_se = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientData("samples need distinct eps values");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    f.rss += r * r;
  }
  f.slope_se = x.size() > 2 ? std::sqrt(f.rss / (n - 2.0) / sxx) : 0.0;
  return f;
}

bool same_q(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

double combined_se(const DimensionEstimate& a, const DimensionEstimate& b) {
  return std::hypot(a.slope_se, b.slope_se);
}

// left <= right
InequalityAudit audit_le(const std::string& relation, double q, const DimensionEstimate& l,
                         const DimensionEstimate& r) {
  InequalityAudit a;
  a.relation = relation;
  a.q = q;
  a.eps_min = std::min(l.eps_min, r.eps_min);
  a.eps_max = std::max(l.eps_max, r.eps_max);
  a.left = l.slope;
  a.right = r.slope;
  a.tolerance = std::max(kAuditToleranceFloor, 4.0 * combined_se(l, r));
  if (r.slope.is_infinite()) {
    a.margin = std::numeric_limits<double>::infinity();
    a.verdict = Verdict::kHolds;
  } else if (l.slope.is_infinite()) {
    a.margin = -std::numeric_limits<double>::infinity();
    a.verdict = Verdict::kViolated;
  } else {
    a.margin = r.slope.value() - l.slope.value();
    a.verdict = a.margin >= -a.tolerance ? Verdict::kHolds : Verdict::kViolated;
  }
  return a;
}

InequalityAudit audit_eq(const std::string& relation, double q, const DimensionEstimate& l,
                         const DimensionEstimate& r) {
  InequalityAudit a;
  a.relation = relation;
  a.q = q;
  a.eps_min = std::min(l.eps_min, r.eps_min);
  a.eps_max = std::max(l.eps_max, r.eps_max);
  a.left = l.slope;
  a.right = r.slope;
  a.tolerance = std::max(kAuditToleranceFloor, 3.0 * std::max(l.residual_rms, r.residual_rms));
  if (l.slope.is_infinite() || r.slope.is_infinite()) {
    const bool both = l.slope.is_infinite() && r.slope.is_infinite();
    a.margin = both ? 0.0 : -std::numeric_limits<double>::infinity();
    a.verdict = both ? Verdict::kHolds : Verdict::kViolated;
  } else {
    a.margin = -std::abs(l.slope.value() - r.slope.value());
    a.verdict = a.margin >= -a.tolerance ? Verdict::kHolds : Verdict::kViolated;
  }
  return a;
}

InequalityAudit missing(const std::string& relation, double q) {
  InequalityAudit a;
  a.relation = relation;
  a.q = q;
  a.verdict = Verdict::kInconclusive;
  return a;
}

}  // namespace

DimensionEstimate fit_dimension(std::span<const PartitionSample> samples, double q, const FitOptions& opts) {
  std::vector<PartitionSample> pts;
  for (const auto& s : samples) {
    if (same_q(s.q, q)) pts.push_back(s);
  }
  if (pts.empty()) throw InsufficientData("no samples at this q");
  for (const auto& s : pts) {
    if (s.family != pts.front().family || s.variant != pts.front().variant) {
      throw DomainError("samples mix families or variants");
    }
  }
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.epsilon > b.epsilon; });
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].epsilon == pts[i - 1].epsilon) throw DomainError("duplicate eps in samples");
  }
  if (opts.drop_largest && !pts.empty()) pts.erase(pts.begin());

  DimensionEstimate est;
  est.family = pts.empty() ? samples.front().family : pts.front().family;
  est.variant = pts.empty() ? samples.front().variant : pts.front().variant;
  est.theta = pts.empty() ? 0.0 : pts.front().theta;
  est.q = q;
  if (pts.empty()) throw InsufficientData("need at least 4 samples at distinct eps");
  est.eps_max = pts.front().epsilon;
  est.eps_min = pts.back().epsilon;
  est.points = pts.size();
  if (pts.size() < 4) throw InsufficientData("need at least 4 samples at distinct eps");

  const bool log_family = est.variant == Variant::kLog;
  if (std::all_of(pts.begin(), pts.end(), [](const auto& s) { return s.divergent || s.value.is_infinite(); })) {
    throw AllDivergent("every sample in the window is divergent");
  }
  if (std::any_of(pts.begin(), pts.end(), [](const auto& s) { return s.divergent || s.value.is_infinite(); })) {
    est.divergent = true;
    est.slope = ExtendedReal::infinity();
    return est;
  }
  if (!log_family && q == 1.0) throw DomainError("q = 1 needs the logarithmic variant");
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& s : pts) {
    const double v = s.value.value();
    if (!log_family && !(v > 0.0)) continue;
    if (!std::isfinite(v)) continue;
    x.push_back(std::log(s.epsilon));
    y.push_back(log_family ? v : std::log(v));
  }
  if (x.size() < 4) throw InsufficientData("need at least 4 finite samples at distinct eps");
  const double scale = log_family ? 1.0 : 1.0 / (q - 1.0);
  const LineFit f = least_squares(x, y);
  est.slope = ExtendedReal(f.slope * scale);
  est.intercept = f.intercept;
  est.slope_se = f.slope_se * std::abs(scale);
  est.residual_rms = std::sqrt(f.rss / static_cast<double>(x.size())) * std::abs(scale);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double s = (y[i + 1] - y[i]) / (x[i + 1] - x[i]) * scale;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  est.spread = hi - lo;
  return est;
}

std::vector<DimensionEstimate> fit_table(std::span<const PartitionSample> table, const FitOptions& opts,
                                         std::vector<FitFailure>* skipped) {
  // group by (family, theta, variant, q) in first-appearance order
  std::vector<std::tuple<Family, double, Variant, double>> keys;
  for (const auto& s : table) {
    const auto key = std::make_tuple(s.family, s.theta, s.variant, s.q);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  std::vector<DimensionEstimate> out;
  for (const auto& [family, theta, variant, q] : keys) {
    std::vector<PartitionSample> group;
    for (const auto& s : table) {
      if (s.family == family && s.theta == theta && s.variant == variant && s.q == q) group.push_back(s);
    }
    try {
      out.push_back(fit_dimension(group, q, opts));
    } catch (const AllDivergent&) {
      // an infinite partition function makes the dimension infinite
      DimensionEstimate est;
      est.family = family;
      est.variant = variant;
      est.theta = theta;
      est.q = q;
      est.divergent = true;
      est.slope = ExtendedReal::infinity();
      for (const auto& s : group) {
        est.eps_max = std::max(est.eps_max, s.epsilon);
        est.eps_min = est.eps_min == 0.0 ? s.epsilon : std::min(est.eps_min, s.epsilon);
      }
      est.points = group.size();
      out.push_back(est);
    } catch (const Error& e) {
      if (skipped) skipped->push_back({family, theta, q, e.what()});
    }
  }
  return out;
}

const DimensionEstimate* find_estimate(std::span<const DimensionEstimate> table, Family f, double q) {
  for (const auto& e : table) {
    if (e.family == f && same_q(e.q, q)) return &e;
  }
  return nullptr;
}

double vnk_exact_dimensions(double q) { return q <= 2.0 ? 1.0 : 1.0 / (q - 1.0); }

double gw_exact_mu_dimensions(double q, double p) {
  if (!(p < -1.0)) throw DomainError("Gaspard-Wang exponent must satisfy p < -1");
  if (q <= -p) return 1.0;
  return (1.0 + 1.0 / p) * q / (q - 1.0);
}

double gw_critical_q(double p) {
  if (!(p < -1.0)) throw DomainError("Gaspard-Wang exponent must satisfy p < -1");
  return p + 1.0;
}

RhoTable vnk_rho_table(unsigned n) {
  if (n < 3) throw DomainError("rho table needs n >= 3");
  if (n > kRhoTableMax) throw ResourceError("rho table order exceeds the supported maximum");
  RhoTable t;
  for (unsigned l = 0; l + 3 <= n; ++l) t[std::uint64_t{3} << l] = std::uint64_t{1} << l;
  t[std::uint64_t{1} << (n - 2)] = std::uint64_t{1} << (n - 2);
  t[std::uint64_t{1} << (n - 1)] = (std::uint64_t{1} << (n - 1)) + 1;
  return t;
}

RhoTable vnk_rho_bruteforce(unsigned n, ExecPolicy policy) {
  if (n < 1) throw DomainError("order must be >= 1");
  if (n > kRhoBruteforceMax) throw ResourceError("brute-force enumeration exceeds the budget (n <= 16)");
  const std::uint64_t size = std::uint64_t{1} << n;
  const auto times = map_indices<std::uint64_t>(size, policy, [&](std::uint64_t j) {
    DyadicWord w(j, n);
    std::uint64_t k = 0;
    for (;;) {
      w = vnk_symbolic_step(w);
      ++k;
      const std::uint64_t i = w.index();
      if (i + 1 >= j && i <= j + 1) return k;
    }
  });
  RhoTable t;
  for (auto m : times) ++t[m];
  return t;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kHolds: return "holds";
    case Verdict::kViolated: return "violated";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::vector<InequalityAudit> audit_main_theorem(std::span<const DimensionEstimate> estimates) {
  std::vector<double> qs;
  for (const auto& e : estimates) {
    if (std::none_of(qs.begin(), qs.end(), [&](double q) { return same_q(q, e.q); })) qs.push_back(e.q);
  }
  std::sort(qs.begin(), qs.end());
  std::vector<InequalityAudit> out;
  for (double q : qs) {
    const auto* d_tau = find_estimate(estimates, Family::GammaTau, q);
    const auto* x_tau = find_estimate(estimates, Family::UpsilonTau, q);
    const auto* x_mu = find_estimate(estimates, Family::UpsilonMu, q);
    const auto* d_mu = find_estimate(estimates, Family::GammaMu, q);
    const auto le = [&](const std::string& rel, const DimensionEstimate* l, const DimensionEstimate* r) {
      out.push_back(l && r ? audit_le(rel, q, *l, *r) : missing(rel, q));
    };
    const auto eq = [&](const std::string& rel, const DimensionEstimate* l, const DimensionEstimate* r) {
      out.push_back(l && r ? audit_eq(rel, q, *l, *r) : missing(rel, q));
    };
    if (q > 0.0) {
      le("dtau<=deltatau", d_tau, x_tau);
      le("deltatau<=deltamu", x_tau, x_mu);
      eq("deltamu=dmu", x_mu, d_mu);
    } else {
      le("deltamu<=deltatau", x_mu, x_tau);
      le("dmu<=deltamu", d_mu, x_mu);
      le("dtau<=deltatau", d_tau, x_tau);
      if (q == 0.0) eq("deltatau=deltamu", x_tau, x_mu);
    }
  }
  return out;
}

ShortReturnReport short_return_bound(std::span<const ReturnProfile> profiles, std::uint64_t k,
                                     std::span<const double> q_list, std::span<const DimensionEstimate> d_tau,
                                     double slack) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& p : profiles) {
    if (k > p.cumulative.size()) throw DomainError("profile shorter than k");
    const double r = p.R(k);
    if (!(r > 0.0)) throw InsufficientData("R(eps;k) must be positive on the window");
    x.push_back(std::log(p.epsilon));
    y.push_back(std::log(r));
  }
  if (x.size() < 2) throw InsufficientData("need at least 2 profiles");
  const LineFit f = least_squares(x, y);
  ShortReturnReport rep;
  rep.k = k;
  rep.delta = f.slope;
  rep.delta_se = f.slope_se;
  rep.intercept = f.intercept;
  for (double q : q_list) {
    if (!(q > 1.0)) continue;
    ShortReturnEntry e;
    e.q = q;
    e.bound = rep.delta / (q - 1.0);
    if (const auto* est = find_estimate(d_tau, Family::GammaTau, q)) {
      e.d_tau = est->slope.value();
      e.holds = *e.d_tau <= e.bound + slack;
    }
    rep.entries.push_back(e);
  }
  return rep;
}

ShapeReport convexity_monotonicity_check(std::span<const DimensionEstimate> spectrum, double tolerance) {
  std::vector<DimensionEstimate> s(spectrum.begin(), spectrum.end());
  std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.q < b.q; });
  ShapeReport rep;
  char buf[160];
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double a = s[i].slope.value();
    const double b = s[i + 1].slope.value();
    if (std::isinf(a)) continue;  // +inf followed by anything is non-increasing
    const double tol = std::max(tolerance, 4.0 * std::hypot(s[i].slope_se, s[i + 1].slope_se));
    if (b > a + tol) {
      rep.monotone = false;
      std::snprintf(buf, sizeof buf, "D(%.12g) = %.12g exceeds D(%.12g) = %.12g", s[i + 1].q, b, s[i].q, a);
      rep.notes.emplace_back(buf);
    }
  }
  // log Gamma is convex in q (Hoelder), so (q-1) D = log Gamma / log eps is
  // concave; checked separately on each side of q = 1
  for (const bool above : {false, true}) {
    std::vector<std::pair<double, double>> f;
    for (const auto& e : s) {
      if ((above ? e.q > 1.0 : e.q < 1.0) && e.slope.is_finite()) f.emplace_back(e.q, (e.q - 1.0) * e.slope.value());
    }
    for (std::size_t i = 0; i + 2 < f.size(); ++i) {
      const auto [q0, f0] = f[i];
      const auto [q1, f1] = f[i + 1];
      const auto [q2, f2] = f[i + 2];
      const double w = (q2 - q1) / (q2 - q0);
      const double chord = w * f0 + (1.0 - w) * f2;
      if (f1 < chord - tolerance * std::abs(q1 - 1.0)) {
        rep.concave = false;
        std::snprintf(buf, sizeof buf, "(q-1)D(q) below its chord at q = %.12g", q1);
        rep.notes.emplace_back(buf);
      }
    }
  }
  return rep;
}

std::vector<ConjectureLine> conjecture_probe(std::span<const DimensionEstimate> d_tau,
                                             std::span<const DimensionEstimate> d_mu, double q_c, double tolerance) {
  std::vector<ConjectureLine> out;
  const DimensionEstimate* mu2 = nullptr;
  for (const auto& e : d_mu) {
    if (same_q(e.q, 2.0)) mu2 = &e;
  }
  for (const auto& t : d_tau) {
    ConjectureLine line;
    line.q = t.q;
    line.d_tau = t.slope;
    if (t.q > q_c && t.q <= 2.0) {
      const DimensionEstimate* m = nullptr;
      for (const auto& e : d_mu) {
        if (same_q(e.q, t.q)) m = &e;
      }
      if (!m || m->slope.is_infinite()) continue;
      line.clause = "dtau=dmu";
      line.predicted = m->slope.value();
    } else if (t.q >= 2.0 && mu2 && mu2->slope.is_finite()) {
      line.clause = "dtau=dmu2/(q-1)";
      line.predicted = mu2->slope.value() / (t.q - 1.0);
    } else {
      continue;
    }
    line.match = t.slope.is_finite() && std::abs(t.slope.value() - line.predicted) <= tolerance;
    out.push_back(line);
  }
  return out;
}

}  // namespace rtd
