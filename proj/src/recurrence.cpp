#include "rtd/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rtd {

namespace {

constexpr std::uint64_t kStreamReturnDistribution = 0x5244;

long double power_of(std::uint64_t j, const MomentOrder& o) {
  const auto x = static_cast<long double>(j);
  return o.log ? std::log(x) : std::pow(x, static_cast<long double>(o.s));
}

}  // namespace

double ReturnDistribution::total() const {
  long double t = censored_mass;
  for (const auto& [j, m] : mass) t += m;
  return static_cast<double>(t);
}

bool MomentReport::all_hold() const {
  return std::all_of(checks.begin(), checks.end(), [](const MomentCheck& c) { return c.skipped || c.holds; });
}

bool MomentReport::all_equalities() const {
  // monotonicity in s is strict away from degenerate laws, so it is excluded
  return std::all_of(checks.begin(), checks.end(), [](const MomentCheck& c) {
    return c.skipped || c.relation == "monotone" || std::abs(c.margin) <= c.tolerance;
  });
}

ReturnOutcome first_return_time(double x, const Interval& set, const DynamicalSystem& sys,
                                std::uint64_t cap) {
  if (!set.contains(x)) throw DomainError("start point must lie in the target set");
  return sys.first_entry(x, set, cap);
}

ReturnOutcome first_return_to_enlarged(double x, const GridSpec& grid, const DynamicalSystem& sys,
                                       std::uint64_t cap) {
  return sys.first_entry(x, grid.enlarged(grid.index_of(x)), cap);
}

ReturnDistribution estimate_return_distribution(const Interval& set, const DynamicalSystem& sys,
                                                const McOptions& opts) {
  if (opts.samples < 1) throw DomainError("sample count must be >= 1");
  const double measure = sys.measure_of_interval(set.lo, set.hi);
  if (!(measure > 0.0)) throw DomainError("target set has zero measure");
  const auto outcomes = generate_samples<ReturnOutcome>(
      opts.samples, {opts.seed, kStreamReturnDistribution}, opts.policy,
      [&](Rng& rng, std::uint64_t) {
        for (int attempt = 0;; ++attempt) {
          const double x = sys.sample_conditional(rng, set);
          try {
            return sys.first_entry(x, set, opts.cap);
          } catch (const BoundaryPoint&) {
            if (attempt > 100) throw;
          }
        }
      });
  ReturnDistribution d;
  d.sample_count = opts.samples;
  d.target_set_measure = measure;
  d.cap = opts.cap;
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t censored = 0;
  for (const auto& o : outcomes) {
    if (o.is_censored()) ++censored; else ++counts[o.time()];
  }
  const double n = static_cast<double>(opts.samples);
  for (const auto& [j, c] : counts) d.mass[j] = static_cast<double>(c) / n;
  d.censored_mass = static_cast<double>(censored) / n;
  if (d.censored_mass > opts.censor_warn_threshold && opts.warn) {
    opts.warn("cap too small: censored fraction " + std::to_string(d.censored_mass) +
              " at cap " + std::to_string(opts.cap));
  }
  return d;
}

std::vector<std::uint64_t> vnk_box_return_times(unsigned n, ExecPolicy policy) {
  if (n < 1 || n > 20) throw ResourceError("dyadic box enumeration supports 1 <= n <= 20");
  const std::uint64_t size = std::uint64_t{1} << n;
  return map_indices<std::uint64_t>(size, policy, [&](std::uint64_t j) {
    DyadicWord w(j, n);
    std::uint64_t k = 0;
    do {
      w = vnk_symbolic_step(w);
      ++k;
    } while (w.index() != j);
    return k;
  });
}

ReturnDistribution vnk_dyadic_box_distribution(unsigned n, std::uint64_t j) {
  if (n < 1 || n > 40) throw ResourceError("dyadic box order out of range");
  const DyadicWord start(j, n);
  DyadicWord w = start;
  std::uint64_t k = 0;
  do {
    w = vnk_symbolic_step(w);
    ++k;
  } while (!(w == start));
  ReturnDistribution d;
  d.mass[k] = 1.0;
  d.target_set_measure = std::ldexp(1.0, -static_cast<int>(n));
  d.cap = k;
  return d;
}

ReturnDistribution gw_i0_distribution(const GaspardWang& map, std::uint64_t terms) {
  ReturnDistribution d;
  for (std::uint64_t j = 0; j < terms; ++j) d.mass[j + 1] = map.length(static_cast<std::int64_t>(j));
  d.censored_mass = map.c(terms);
  d.target_set_measure = map.interval_mass(0);
  d.cap = terms;
  return d;
}

MomentValue moment(const ReturnDistribution& dist, MomentOrder order) {
  long double sum = 0.0L;
  long double sum_sq = 0.0L;
  for (const auto& [j, m] : dist.mass) {
    const long double f = power_of(j, order);
    sum += f * m;
    sum_sq += f * f * m;
  }
  long double with_censored = sum;
  if (dist.censored_mass > 0.0) {
    const long double f = power_of(std::max<std::uint64_t>(dist.cap, 1), order);
    with_censored += f * dist.censored_mass;
    sum_sq += f * f * dist.censored_mass;
  }
  MomentValue v;
  v.order = order;
  v.value = ExtendedReal(static_cast<double>(with_censored));
  v.lower_bound_from_censoring = static_cast<double>(with_censored);
  v.is_lower_bound = dist.censored_mass > 0.0 && (order.log || order.s > 0.0);
  if (dist.sample_count > 0) {
    const long double var = std::max(0.0L, sum_sq - with_censored * with_censored);
    v.std_error = static_cast<double>(std::sqrt(var / static_cast<long double>(dist.sample_count)));
  }
  return v;
}

KacResidual kac_residual(const ReturnDistribution& dist) {
  if (!(dist.target_set_measure > 0.0)) throw DomainError("target set measure not recorded");
  const MomentValue m1 = moment(dist, MomentOrder::power(1.0));
  return {m1.value.value() - 1.0 / dist.target_set_measure, m1.std_error};
}

MomentReport check_moment_inequalities(const ReturnDistribution& dist, std::span<const double> s_list) {
  MomentReport report;
  const bool censored = dist.censored_mass > 0.0;
  const MomentValue m1 = moment(dist, MomentOrder::power(1.0));
  const double nu1 = m1.value.value();
  const auto tol_for = [](double lhs, double rhs, double se) {
    return 1e-12 * std::max({std::abs(lhs), std::abs(rhs), 1.0}) + 4.0 * se;
  };

  std::vector<double> sorted(s_list.begin(), s_list.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<double, MomentValue>> values;
  for (double s : sorted) {
    MomentCheck c;
    c.s = s;
    if (censored && s > 0.0) {
      c.relation = "nu_s vs nu_1^s";
      c.skipped = true;
      report.checks.push_back(c);
      continue;
    }
    const MomentValue ms = moment(dist, MomentOrder::power(s));
    values.emplace_back(s, ms);
    c.lhs = ms.value.value();
    c.rhs = std::pow(nu1, s);
    const double se = ms.std_error + std::abs(s) * std::pow(nu1, s - 1.0) * m1.std_error;
    if (s >= 0.0 && s <= 1.0) {
      c.relation = "nu_s<=nu_1^s";
      c.margin = c.rhs - c.lhs;
    } else {
      c.relation = "nu_s>=nu_1^s";
      c.margin = c.lhs - c.rhs;
    }
    c.tolerance = tol_for(c.lhs, c.rhs, se);
    c.holds = c.margin >= -c.tolerance;
    report.checks.push_back(c);
  }
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    MomentCheck c;
    c.relation = "monotone";
    c.s = values[i].first;
    c.lhs = values[i].second.value.value();
    c.rhs = values[i + 1].second.value.value();
    c.margin = c.rhs - c.lhs;
    c.tolerance = tol_for(c.lhs, c.rhs, values[i].second.std_error + values[i + 1].second.std_error);
    c.holds = c.margin >= -c.tolerance;
    report.checks.push_back(c);
  }
  MomentCheck lg;
  lg.relation = "nu_log<=log_nu_1";
  if (censored) {
    lg.skipped = true;
  } else {
    const MomentValue ml = moment(dist, MomentOrder::log_tag());
    lg.lhs = ml.value.value();
    lg.rhs = std::log(nu1);
    lg.margin = lg.rhs - lg.lhs;
    lg.tolerance = tol_for(lg.lhs, lg.rhs, ml.std_error + m1.std_error / nu1);
    lg.holds = lg.margin >= -lg.tolerance;
  }
  report.checks.push_back(lg);
  return report;
}

}  // namespace rtd
