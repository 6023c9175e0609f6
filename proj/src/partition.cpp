#include "rtd/partition.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>

#include "rtd/vnk_exact.hpp"

namespace rtd {

namespace {

constexpr std::array<const char*, 8> kFamilyNames = {
    "gamma_mu", "gamma_tau", "upsilon_mu", "upsilon_tau", "phi_mu", "psi_mu", "psi_tau", "upsilon_tilde"};

// cap-ladder eligibility: enough exceedances to see a trend, little enough
// censoring that the bulk of the law is resolved
constexpr std::uint64_t kLadderMinExceed = 10;
constexpr double kLadderMaxCensored = 0.01;
constexpr double kLadderRelChange = 0.10;

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// stream id of one (family, grid) cell so that cells draw independent samples
std::uint64_t cell_stream(Family f, double theta, double eps) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(f) + 0x5054ULL);
  h = mix64(h ^ std::bit_cast<std::uint64_t>(theta));
  return mix64(h ^ std::bit_cast<std::uint64_t>(eps));
}

void check_orders(std::span<const Order> orders) {
  for (const auto& o : orders) {
    if (!std::isfinite(o.q)) throw DomainError("q must be finite");
  }
}

PartitionSample blank(Family f, const Order& o, double theta, double eps) {
  PartitionSample s;
  s.family = f;
  s.variant = o.variant;
  s.theta = theta;
  s.epsilon = eps;
  s.q = o.variant == Variant::kLog ? 1.0 : o.q;
  return s;
}

// sum over boxes of w * g(m) with positive box measure
struct BoxMasses {
  std::vector<double> plain;
  std::vector<double> enlarged;
};

BoxMasses box_masses(const GridSpec& grid, const DynamicalSystem& sys, bool want_enlarged) {
  BoxMasses b;
  for (std::int64_t j = grid.first_index(); j <= grid.last_index(); ++j) {
    const Interval box = grid.box(j);
    const double m = sys.measure_of_interval(box.lo, box.hi);
    if (!(m > 0.0)) continue;
    b.plain.push_back(m);
    if (want_enlarged) {
      const Interval e = grid.enlarged(j);
      b.enlarged.push_back(sys.measure_of_interval(e.lo, e.hi));
    }
  }
  return b;
}

// tau^(1-q), or log(1/tau) for the log variant
long double tau_power(std::uint64_t t, const Order& o) {
  const auto x = static_cast<long double>(t);
  return o.variant == Variant::kLog ? -std::log(x) : std::pow(x, static_cast<long double>(1.0 - o.q));
}

long double exact_tau_value(const ReturnDistribution& d, const Order& o) {
  long double v = 0.0L;
  for (const auto& [m, w] : d.mass) v += w * tau_power(m, o);
  if (d.censored_mass > 0.0) v += d.censored_mass * tau_power(std::max<std::uint64_t>(d.cap, 1), o);
  return v;
}

// Monte Carlo return-time samples: `stride` returns per point, censored as cap + 1.
struct TauSamples {
  std::vector<std::uint64_t> times;
  std::size_t stride = 1;
  std::uint64_t count = 0;
  std::uint64_t cap = 0;
};

template <class Fn>
TauSamples draw_tau(std::size_t stride, std::uint64_t stream, const McOptions& opts, Fn&& per_point) {
  if (opts.samples < 1) throw DomainError("sample count must be >= 1");
  if (opts.cap < 1) throw DomainError("cap must be >= 1");
  using Tuple = std::array<std::uint64_t, 3>;
  const auto tuples = generate_samples<Tuple>(opts.samples, {opts.seed, stream}, opts.policy,
                                               [&](Rng& rng, std::uint64_t) {
                                                 for (int attempt = 0;; ++attempt) {
                                                   try {
                                                     return per_point(rng);
                                                   } catch (const BoundaryPoint&) {
                                                     if (attempt > 100) throw;
                                                   }
                                                 }
                                               });
  TauSamples s;
  s.stride = stride;
  s.count = opts.samples;
  s.cap = opts.cap;
  s.times.reserve(opts.samples * stride);
  for (const auto& t : tuples) {
    for (std::size_t l = 0; l < stride; ++l) s.times.push_back(t[l]);
  }
  return s;
}

std::uint64_t encode(const ReturnOutcome& o, std::uint64_t cap) {
  return o.is_censored() ? cap + 1 : o.time();
}

std::vector<PartitionSample> evaluate_tau_samples(Family f, const TauSamples& s, std::span<const Order> orders,
                                                  double theta, double eps, const McOptions& opts) {
  const auto censored = static_cast<std::uint64_t>(
      std::count_if(s.times.begin(), s.times.end(), [&](std::uint64_t t) { return t > s.cap; }));
  const double censored_fraction = static_cast<double>(censored) / static_cast<double>(s.times.size());
  if (censored_fraction > opts.censor_warn_threshold && opts.warn) {
    opts.warn("cap too small: censored fraction " + std::to_string(censored_fraction) + " for " +
              family_name(f) + " at eps " + std::to_string(eps));
  }
  std::vector<PartitionSample> out;
  for (const auto& o : orders) {
    PartitionSample r = blank(f, o, theta, eps);
    long double sum = 0.0L;
    long double sum_sq = 0.0L;
    for (std::uint64_t i = 0; i < s.count; ++i) {
      long double v = 0.0L;
      for (std::size_t l = 0; l < s.stride; ++l) v += tau_power(std::min(s.times[i * s.stride + l], s.cap), o);
      // the log variant of a multi-grid sum is the mean over grids
      if (o.variant == Variant::kLog) v /= static_cast<long double>(s.stride);
      sum += v;
      sum_sq += v * v;
    }
    const auto n = static_cast<long double>(s.count);
    const long double mean = sum / n;
    const long double var = s.count > 1 ? std::max(0.0L, (sum_sq - n * mean * mean) / (n - 1)) : 0.0L;
    r.value = ExtendedReal(static_cast<double>(mean));
    r.std_error = static_cast<double>(std::sqrt(var / n));
    r.censored_fraction = censored_fraction;
    if (o.variant == Variant::kPower) r.divergent = cap_doubling_divergent(s.times, s.stride, o.q, s.cap);
    out.push_back(r);
  }
  return out;
}

std::vector<PartitionSample> evaluate_exact_tau(Family f, std::span<const ReturnDistribution> dists,
                                                std::span<const Order> orders, double theta, double eps) {
  std::vector<PartitionSample> out;
  for (const auto& o : orders) {
    PartitionSample r = blank(f, o, theta, eps);
    long double v = 0.0L;
    double censored = 0.0;
    for (const auto& d : dists) {
      v += exact_tau_value(d, o);
      censored = std::max(censored, d.censored_mass);
    }
    if (o.variant == Variant::kLog) v /= static_cast<long double>(dists.size());
    r.value = ExtendedReal(static_cast<double>(v));
    r.censored_fraction = censored;
    out.push_back(r);
  }
  return out;
}

bool is_vnk(const DynamicalSystem& sys) { return sys.name() == "vnk"; }

bool use_exact_grid(const GridSpec& grid, const DynamicalSystem& sys, const McOptions& opts) {
  if (opts.mode == EvalMode::kMonteCarlo || !is_vnk(sys)) {
    if (opts.mode == EvalMode::kExact) throw DomainError("no exact path for this system");
    return false;
  }
  const bool dyadic = grid.dyadic_level(24).has_value();
  if (opts.mode == EvalMode::kExact && !dyadic) throw DomainError("exact path needs a dyadic grid");
  return dyadic;
}

long double integral_of(double a, double b, const Order& o) {
  // integral over t in [a,b] of t^(q-1), or of log t
  const long double la = a;
  const long double lb = b;
  if (o.variant == Variant::kLog) {
    const auto F = [](long double t) { return t * std::log(t) - t; };
    return F(lb) - F(la);
  }
  if (o.q == 0.0) return std::log(lb / la);
  const auto q = static_cast<long double>(o.q);
  return (std::pow(lb, q) - std::pow(la, q)) / q;
}

long double integrand_at(double m, const Order& o) {
  return o.variant == Variant::kLog ? std::log(static_cast<long double>(m))
                                    : std::pow(static_cast<long double>(m), static_cast<long double>(o.q - 1.0));
}

}  // namespace

std::string family_name(Family f) { return kFamilyNames.at(static_cast<std::size_t>(f)); }

std::optional<Family> parse_family(const std::string& s) {
  for (std::size_t i = 0; i < kFamilyNames.size(); ++i) {
    if (s == kFamilyNames[i]) return static_cast<Family>(i);
  }
  return std::nullopt;
}

std::string variant_name(Variant v) { return v == Variant::kLog ? "log" : "power"; }

std::optional<Variant> parse_variant(const std::string& s) {
  if (s == "power") return Variant::kPower;
  if (s == "log") return Variant::kLog;
  return std::nullopt;
}

bool is_tau_family(Family f) {
  return f == Family::GammaTau || f == Family::UpsilonTau || f == Family::PsiTau || f == Family::UpsilonTilde;
}

std::vector<Order> spectrum_orders(std::span<const double> qs) {
  std::vector<Order> out;
  for (double q : qs) out.push_back(q == 1.0 ? Order::log() : Order::power(q));
  return out;
}

bool cap_doubling_divergent(std::span<const std::uint64_t> times, std::size_t stride, double q,
                            std::uint64_t cap) {
  if (q >= 1.0 || times.empty() || stride == 0) return false;
  std::vector<std::uint64_t> sorted(times.begin(), times.end());
  std::sort(sorted.begin(), sorted.end());
  const double e = 1.0 - q;
  std::vector<long double> prefix(sorted.size() + 1, 0.0L);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    prefix[i + 1] = prefix[i] + std::pow(static_cast<long double>(std::min(sorted[i], cap)), e);
  }
  const auto points = static_cast<long double>(times.size() / stride);
  struct Rung {
    long double value;
    std::uint64_t exceed;
  };
  const auto rung = [&](std::uint64_t c) {
    const auto below = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), c) - sorted.begin());
    const std::uint64_t exceed = sorted.size() - below;
    const long double v = prefix[below] + static_cast<long double>(exceed) * std::pow(static_cast<long double>(c), e);
    return Rung{v / points, exceed};
  };
  std::vector<std::uint64_t> caps;
  for (std::uint64_t c = cap; c >= 1; c >>= 1) caps.push_back(c);
  std::reverse(caps.begin(), caps.end());
  std::vector<Rung> rungs;
  for (auto c : caps) rungs.push_back(rung(c));
  const auto total = static_cast<double>(sorted.size());
  // doubling i goes from caps[i] to caps[i+1]
  const auto jumps = [&](std::size_t i) {
    const Rung& a = rungs[i];
    const bool eligible = a.exceed >= kLadderMinExceed && static_cast<double>(a.exceed) / total <= kLadderMaxCensored;
    return eligible && a.value > 0 && std::abs(rungs[i + 1].value - a.value) / a.value > kLadderRelChange;
  };
  for (std::size_t i = 0; i + 2 < rungs.size(); ++i) {
    if (jumps(i) && jumps(i + 1)) return true;
  }
  return false;
}

double lebesgue_gamma_mu(double eps, Order order) {
  if (!(eps > 0.0)) throw DomainError("ball radius must be positive");
  // mu(B_eps(x)) = min(x+eps,1) - max(x-eps,0) is piecewise linear in x
  long double v = 0.0L;
  if (eps <= 0.5) {
    v = 2.0L * integral_of(eps, 2.0 * eps, order) + (1.0L - 2.0L * eps) * integrand_at(2.0 * eps, order);
  } else if (eps < 1.0) {
    v = 2.0L * integral_of(eps, 1.0, order) + (2.0L * eps - 1.0L) * integrand_at(1.0, order);
  } else {
    v = integrand_at(1.0, order);
  }
  return static_cast<double>(v);
}

std::vector<PartitionSample> gamma_mu(double eps, std::span<const Order> orders, const DynamicalSystem& sys,
                                      const McOptions& opts) {
  if (!(eps > 0.0)) throw DomainError("ball radius must be positive");
  check_orders(orders);
  std::vector<PartitionSample> out;
  const bool exact = opts.mode != EvalMode::kMonteCarlo && sys.lebesgue_invariant();
  if (opts.mode == EvalMode::kExact && !exact) throw DomainError("no exact path for this system");
  if (exact) {
    for (const auto& o : orders) {
      PartitionSample r = blank(Family::GammaMu, o, 0.0, eps);
      r.value = ExtendedReal(lebesgue_gamma_mu(eps, o));
      out.push_back(r);
    }
    return out;
  }
  if (opts.samples < 1) throw DomainError("sample count must be >= 1");
  const auto masses = generate_samples<double>(
      opts.samples, {opts.seed, cell_stream(Family::GammaMu, 0.0, eps)}, opts.policy, [&](Rng& rng, std::uint64_t) {
        const double x = sys.sample_invariant(rng);
        return sys.measure_of_interval(std::max(x - eps, 0.0), std::min(x + eps, 1.0));
      });
  const auto n = static_cast<long double>(masses.size());
  for (const auto& o : orders) {
    PartitionSample r = blank(Family::GammaMu, o, 0.0, eps);
    long double sum = 0.0L;
    long double sum_sq = 0.0L;
    for (double m : masses) {
      const long double v = integrand_at(m, o);
      sum += v;
      sum_sq += v * v;
    }
    const long double mean = sum / n;
    const long double var = masses.size() > 1 ? std::max(0.0L, (sum_sq - n * mean * mean) / (n - 1)) : 0.0L;
    r.value = ExtendedReal(static_cast<double>(mean));
    r.std_error = static_cast<double>(std::sqrt(var / n));
    out.push_back(r);
  }
  return out;
}

std::vector<PartitionSample> gamma_tau(double eps, std::span<const Order> orders, const DynamicalSystem& sys,
                                       const McOptions& opts) {
  if (!(eps > 0.0)) throw DomainError("ball radius must be positive");
  check_orders(orders);
  const bool exact = opts.mode != EvalMode::kMonteCarlo && is_vnk(sys);
  if (opts.mode == EvalMode::kExact && !exact) throw DomainError("no exact path for this system");
  if (exact) {
    const ReturnDistribution d = vnk_ball_return_distribution(eps, opts.cap);
    return evaluate_exact_tau(Family::GammaTau, std::span(&d, 1), orders, 0.0, eps);
  }
  const TauSamples s = draw_tau(1, cell_stream(Family::GammaTau, 0.0, eps), opts, [&](Rng& rng) {
    const double x = sys.sample_invariant(rng);
    return std::array<std::uint64_t, 3>{encode(sys.first_return_to_ball(x, eps, opts.cap), opts.cap), 0, 0};
  });
  return evaluate_tau_samples(Family::GammaTau, s, orders, 0.0, eps, opts);
}

PartitionSample gamma_mu(double eps, Order order, const DynamicalSystem& sys, const McOptions& opts) {
  return gamma_mu(eps, std::span(&order, 1), sys, opts).front();
}

PartitionSample gamma_tau(double eps, Order order, const DynamicalSystem& sys, const McOptions& opts) {
  return gamma_tau(eps, std::span(&order, 1), sys, opts).front();
}

std::vector<PartitionSample> upsilon_mu(const GridSpec& grid, std::span<const Order> orders,
                                        const DynamicalSystem& sys) {
  check_orders(orders);
  const BoxMasses b = box_masses(grid, sys, false);
  std::vector<PartitionSample> out;
  for (const auto& o : orders) {
    PartitionSample r = blank(Family::UpsilonMu, o, grid.origin(), grid.side());
    long double v = 0.0L;
    for (double m : b.plain) {
      const long double lm = m;
      v += o.variant == Variant::kLog ? lm * std::log(lm) : std::pow(lm, static_cast<long double>(o.q));
    }
    r.value = ExtendedReal(static_cast<double>(v));
    out.push_back(r);
  }
  return out;
}

std::vector<PartitionSample> phi_mu(const GridSpec& grid, std::span<const Order> orders,
                                    const DynamicalSystem& sys) {
  check_orders(orders);
  const BoxMasses b = box_masses(grid, sys, true);
  std::vector<PartitionSample> out;
  for (const auto& o : orders) {
    if (o.variant == Variant::kLog) throw DomainError("phi_mu has no logarithmic variant");
    PartitionSample r = blank(Family::PhiMu, o, grid.origin(), grid.side());
    long double v = 0.0L;
    for (double m : b.enlarged) v += std::pow(static_cast<long double>(m), static_cast<long double>(o.q));
    r.value = ExtendedReal(static_cast<double>(v));
    out.push_back(r);
  }
  return out;
}

std::vector<PartitionSample> psi_mu(const GridSpec& grid, std::span<const Order> orders,
                                    const DynamicalSystem& sys) {
  check_orders(orders);
  const BoxMasses b = box_masses(grid, sys, true);
  std::vector<PartitionSample> out;
  for (const auto& o : orders) {
    PartitionSample r = blank(Family::PsiMu, o, grid.origin(), grid.side());
    long double v = 0.0L;
    for (std::size_t i = 0; i < b.plain.size(); ++i) v += b.plain[i] * integrand_at(b.enlarged[i], o);
    r.value = ExtendedReal(static_cast<double>(v));
    out.push_back(r);
  }
  return out;
}

std::vector<PartitionSample> upsilon_tau(const GridSpec& grid, std::span<const Order> orders,
                                         const DynamicalSystem& sys, const McOptions& opts) {
  check_orders(orders);
  if (use_exact_grid(grid, sys, opts)) {
    const ReturnDistribution d = vnk_grid_return_distribution(grid, BoxKind::kPlain);
    return evaluate_exact_tau(Family::UpsilonTau, std::span(&d, 1), orders, grid.origin(), grid.side());
  }
  const TauSamples s = draw_tau(1, cell_stream(Family::UpsilonTau, grid.origin(), grid.side()), opts, [&](Rng& rng) {
    double x = sys.sample_invariant(rng);
    while (grid.on_boundary(x)) x = sys.sample_invariant(rng);
    const Interval box = grid.box(grid.index_of(x));
    return std::array<std::uint64_t, 3>{encode(sys.first_entry(x, box, opts.cap), opts.cap), 0, 0};
  });
  return evaluate_tau_samples(Family::UpsilonTau, s, orders, grid.origin(), grid.side(), opts);
}

std::vector<PartitionSample> psi_tau(const GridSpec& grid, std::span<const Order> orders,
                                     const DynamicalSystem& sys, const McOptions& opts) {
  check_orders(orders);
  if (use_exact_grid(grid, sys, opts)) {
    const ReturnDistribution d = vnk_grid_return_distribution(grid, BoxKind::kEnlarged);
    return evaluate_exact_tau(Family::PsiTau, std::span(&d, 1), orders, grid.origin(), grid.side());
  }
  const TauSamples s = draw_tau(1, cell_stream(Family::PsiTau, grid.origin(), grid.side()), opts, [&](Rng& rng) {
    double x = sys.sample_invariant(rng);
    while (grid.on_boundary(x)) x = sys.sample_invariant(rng);
    return std::array<std::uint64_t, 3>{encode(first_return_to_enlarged(x, grid, sys, opts.cap), opts.cap), 0, 0};
  });
  return evaluate_tau_samples(Family::PsiTau, s, orders, grid.origin(), grid.side(), opts);
}

std::vector<PartitionSample> upsilon_tilde_tau(const GridSpec& grid, std::span<const Order> orders,
                                               const DynamicalSystem& sys, const McOptions& opts) {
  check_orders(orders);
  const std::vector<GridSpec> triple = grid.shifted_triple();
  bool exact = true;
  for (const auto& g : triple) exact = exact && use_exact_grid(g, sys, opts);
  if (exact) {
    std::vector<ReturnDistribution> dists;
    for (const auto& g : triple) dists.push_back(vnk_grid_return_distribution(g, BoxKind::kPlain));
    return evaluate_exact_tau(Family::UpsilonTilde, dists, orders, grid.origin(), grid.side());
  }
  const TauSamples s = draw_tau(3, cell_stream(Family::UpsilonTilde, grid.origin(), grid.side()), opts, [&](Rng& rng) {
    const auto on_any = [&](double x) {
      return std::any_of(triple.begin(), triple.end(), [&](const GridSpec& g) { return g.on_boundary(x); });
    };
    double x = sys.sample_invariant(rng);
    while (on_any(x)) x = sys.sample_invariant(rng);
    std::array<std::uint64_t, 3> t{};
    for (std::size_t l = 0; l < 3; ++l) {
      const Interval box = triple[l].box(triple[l].index_of(x));
      t[l] = encode(sys.first_entry(x, box, opts.cap), opts.cap);
    }
    return t;
  });
  return evaluate_tau_samples(Family::UpsilonTilde, s, orders, grid.origin(), grid.side(), opts);
}

std::vector<PartitionSample> evaluate_family(Family family, const GridSpec& grid, std::span<const Order> orders,
                                             const DynamicalSystem& sys, const McOptions& opts) {
  switch (family) {
    case Family::GammaMu: return gamma_mu(grid.side(), orders, sys, opts);
    case Family::GammaTau: return gamma_tau(grid.side(), orders, sys, opts);
    case Family::UpsilonMu: return upsilon_mu(grid, orders, sys);
    case Family::UpsilonTau: return upsilon_tau(grid, orders, sys, opts);
    case Family::PhiMu: return phi_mu(grid, orders, sys);
    case Family::PsiMu: return psi_mu(grid, orders, sys);
    case Family::PsiTau: return psi_tau(grid, orders, sys, opts);
    case Family::UpsilonTilde: return upsilon_tilde_tau(grid, orders, sys, opts);
  }
  throw DomainError("unknown family");
}

ReturnProfile return_profile(double eps, const DynamicalSystem& sys, const McOptions& opts, std::uint64_t k_max) {
  if (!(eps > 0.0)) throw DomainError("ball radius must be positive");
  if (k_max < 1) throw DomainError("k_max must be >= 1");
  ReturnProfile p;
  p.epsilon = eps;
  p.rho.assign(k_max, 0.0);
  const bool exact = opts.mode != EvalMode::kMonteCarlo && is_vnk(sys);
  if (opts.mode == EvalMode::kExact && !exact) throw DomainError("no exact path for this system");
  if (exact) {
    const ReturnDistribution d = vnk_ball_return_distribution(eps, k_max);
    for (const auto& [m, w] : d.mass) p.rho[m - 1] = w;
    p.beyond = d.censored_mass;
    p.exact = true;
  } else {
    if (opts.samples < 1) throw DomainError("sample count must be >= 1");
    const auto outcomes = generate_samples<ReturnOutcome>(
        opts.samples, {opts.seed, cell_stream(Family::GammaTau, -1.0, eps)}, opts.policy,
        [&](Rng& rng, std::uint64_t) { return sys.first_return_to_ball(sys.sample_invariant(rng), eps, k_max); });
    const double w = 1.0 / static_cast<double>(opts.samples);
    for (const auto& o : outcomes) {
      if (o.is_censored()) p.beyond += w; else p.rho[o.time() - 1] += w;
    }
  }
  p.cumulative.resize(k_max);
  std::partial_sum(p.rho.begin(), p.rho.end(), p.cumulative.begin());
  return p;
}

}  // namespace rtd
