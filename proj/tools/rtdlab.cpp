// rtdlab: partition tables, return-time laws, rho tables and the validation suite.
#include <omp.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "rtd/io.hpp"
#include "rtd/maps.hpp"
#include "rtd/oracles.hpp"
#include "rtd/partition.hpp"
#include "rtd/recurrence.hpp"
#include "rtd/scaling.hpp"

namespace fs = std::filesystem;
using namespace rtd;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRange = 3;

struct Common {
  std::string system;
  double p = -1.5;
  std::string eps;
  std::string q = "-3,-2,-1,-0.5,0,0.5,1,1.5,2,3,5";
  std::string theta = "0";
  std::uint64_t samples = 100000;
  std::uint64_t cap = 1000000;
  std::uint64_t seed = 1;
  std::string out;
  int threads = 0;
};

std::string default_eps(const std::string& system) { return system == "gw" ? "2^-4..2^-12" : "2^-4..2^-14"; }

McOptions mc_options(const Common& c) {
  McOptions o;
  o.samples = c.samples;
  o.cap = c.cap;
  o.seed = c.seed;
  o.warn = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
  return o;
}

void write_file(const std::string& dir, const std::string& name, const std::string& text) {
  if (dir.empty()) return;
  fs::create_directories(dir);
  std::ofstream f(fs::path(dir) / name, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + (fs::path(dir) / name).string());
  f << text;
}

CsvTable read_table(const std::string& dir, const std::string& name) {
  std::ifstream f(fs::path(dir) / name, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + (fs::path(dir) / name).string());
  return read_csv(f);
}

std::vector<Family> parse_families(const std::string& spec) {
  std::vector<Family> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto f = parse_family(item);
    if (!f) throw ConfigError("unknown family '" + item + "'");
    out.push_back(*f);
  }
  return out;
}

std::string render_audits(const std::vector<InequalityAudit>& audits) {
  std::ostringstream os;
  for (const auto& a : audits) {
    os << "  " << verdict_name(a.verdict) << "  " << a.relation << "  q=" << format_real(a.q) << "  "
       << format_extended(a.left) << " vs " << format_extended(a.right) << "  (tol " << format_real(a.tolerance)
       << ")\n";
  }
  return os.str();
}

int cmd_dims(const Common& c, const std::string& families_spec) {
  const auto sys = make_system({c.system, c.p});
  const auto eps = parse_eps_spec(c.eps.empty() ? default_eps(c.system) : c.eps);
  const auto qs = parse_q_spec(c.q);
  const auto thetas = parse_real_list(c.theta);
  for (double u : thetas) {
    if (!(u >= 0.0 && u < 1.0)) throw ConfigError("--theta fractions must lie in [0,1)");
  }
  const auto families = parse_families(families_spec);
  const auto orders = spectrum_orders(qs);
  const McOptions opts = mc_options(c);

  std::vector<PartitionSample> table;
  std::vector<PartitionSample> by_fraction;  // theta replaced by its fraction of eps, for fitting
  std::vector<std::string> errors;
  for (double e : eps) {
    for (Family f : families) {
      const bool ball = f == Family::GammaMu || f == Family::GammaTau;
      for (double th : ball ? std::vector<double>{0.0} : thetas) {
        // phi_mu has no log variant
        std::vector<Order> use = orders;
        if (f == Family::PhiMu) std::erase_if(use, [](const Order& o) { return o.variant == Variant::kLog; });
        try {
          auto rows = evaluate_family(f, GridSpec(th * e, e), use, *sys, opts);
          table.insert(table.end(), rows.begin(), rows.end());
          for (auto& r : rows) r.theta = th;
          by_fraction.insert(by_fraction.end(), rows.begin(), rows.end());
        } catch (const Error& ex) {
          errors.push_back(family_name(f) + " eps=" + format_real(e) + " theta=" + format_real(th) + ": " +
                           ex.what());
        }
      }
    }
  }
  std::vector<FitFailure> skipped;
  const auto est = fit_table(by_fraction, FitOptions{}, &skipped);
  const auto audits = audit_main_theorem(est);

  const std::string spectrum = render_spectrum(est);
  write_file(c.out, "partition.csv", to_csv_text(partition_to_csv(table)));
  write_file(c.out, "dimensions.csv", to_csv_text(dimensions_to_csv(est)));
  write_file(c.out, "audits.csv", to_csv_text(audits_to_csv(audits)));
  write_file(c.out, "spectrum.txt", spectrum);

  std::cout << "system " << sys->name() << ", " << eps.size() << " scales " << format_real(eps.front()) << " .. "
            << format_real(eps.back()) << ", " << table.size() << " cells\n\n"
            << spectrum;
  for (const auto& d : est) {
    if (d.divergent) {
      std::cout << "divergent: " << family_name(d.family) << " q=" << format_real(d.q) << '\n';
    }
  }
  if (!audits.empty()) std::cout << "\naudits\n" << render_audits(audits);
  for (const auto& s : skipped) {
    std::cout << "skipped fit: " << family_name(s.family) << " q=" << format_real(s.q) << ": " << s.reason << '\n';
  }
  for (const auto& e : errors) std::cout << "cell error: " << e << '\n';
  return 0;
}

int cmd_returns(const Common& c, const std::string& set_spec, const std::string& dyadic_spec) {
  ReturnDistribution d;
  std::string label;
  if (!dyadic_spec.empty()) {
    if (c.system != "vnk") throw ConfigError("--dyadic needs --system vnk");
    const auto nj = parse_real_list(dyadic_spec);
    if (nj.size() != 2) throw ConfigError("--dyadic expects n,j");
    d = vnk_dyadic_box_distribution(static_cast<unsigned>(nj[0]), static_cast<std::uint64_t>(nj[1]));
    label = "dyadic box n=" + format_real(nj[0]) + " j=" + format_real(nj[1]);
  } else {
    const auto lh = parse_real_list(set_spec);
    if (lh.size() != 2 || !(lh[0] < lh[1])) throw ConfigError("--set expects lo,hi with lo < hi");
    const auto sys = make_system({c.system, c.p});
    d = estimate_return_distribution(Interval::half_open(lh[0], lh[1]), *sys, mc_options(c));
    label = "[" + format_real(lh[0]) + ", " + format_real(lh[1]) + ")";
  }
  write_file(c.out, "distribution.csv", to_csv_text(distribution_to_csv(d)));
  std::cout << "return-time law of " << label << (d.exact() ? " (exact)" : "") << '\n'
            << "  measure " << format_real(d.target_set_measure) << ", censored mass "
            << format_real(d.censored_mass) << ", support size " << d.mass.size() << '\n';
  const KacResidual k = kac_residual(d);
  std::cout << "  nu_1 - 1/mu = " << format_real(k.residual) << " (se " << format_real(k.std_error) << ")\n";
  for (double s : {-1.0, 0.5, 2.0}) {
    const MomentValue m = moment(d, MomentOrder::power(s));
    std::cout << "  nu_" << format_real(s) << " = " << format_extended(m.value)
              << (m.is_lower_bound ? " (lower bound)" : "") << '\n';
  }
  const MomentValue lg = moment(d, MomentOrder::log_tag());
  std::cout << "  E log tau = " << format_extended(lg.value) << '\n';
  return 0;
}

int cmd_rho(const std::string& out, unsigned n) {
  const RhoTable formula = vnk_rho_table(n);
  const RhoTable brute = vnk_rho_bruteforce(n);
  write_file(out, "rho_n" + std::to_string(n) + ".csv", to_csv_text(rho_to_csv(n, formula, brute)));
  std::cout << "       m   formula  enumerated\n";
  std::uint64_t tf = 0;
  std::uint64_t tb = 0;
  for (const auto& row : rho_to_csv(n, formula, brute).rows) {
    std::printf("%8s %9s %11s\n", row[1].c_str(), row[2].c_str(), row[3].c_str());
  }
  for (const auto& [m, v] : formula) tf += v;
  for (const auto& [m, v] : brute) tb += v;
  std::cout << "totals " << tf << "/" << tb << '\n';
  return formula == brute ? 0 : kExitFail;
}

int cmd_check(const Common& c, const std::vector<std::string>& only, const std::vector<std::string>& systems,
              bool corrupt) {
  ValidationBudget b;
  b.samples = c.samples;
  b.cap = c.cap;
  b.seed = c.seed;
  b.p = c.p;
  b.only = std::set<std::string>(only.begin(), only.end());
  if (!systems.empty()) b.systems = std::set<std::string>(systems.begin(), systems.end());
  b.corrupt_rho_table = corrupt;
  const ValidationReport r = run_full_validation(b);
  std::cout << render_validation(r);
  write_file(c.out, "validation.csv", to_csv_text(validation_to_csv(r)));
  const bool ok = r.all_pass();
  std::cout << (ok ? "all criteria pass\n" : "some criteria fail\n");
  return ok ? 0 : kExitFail;
}

int cmd_report(const std::string& dir) {
  const auto est = dimensions_from_csv(read_table(dir, "dimensions.csv"));
  std::cout << render_spectrum(est);
  if (fs::exists(fs::path(dir) / "audits.csv")) {
    const auto audits = audits_from_csv(read_table(dir, "audits.csv"));
    std::cout << "\naudits\n" << render_audits(audits);
  }
  if (fs::exists(fs::path(dir) / "validation.csv")) {
    const auto t = read_table(dir, "validation.csv");
    std::cout << "\nvalidation\n";
    for (const auto& row : t.rows) std::cout << "  " << row[4] << "  " << row[0] << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rtdlab: return-time and measure dimension spectra of interval maps"};
  app.set_config("--config", "", "flat key = value file; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  Common c;
  std::string families = "gamma_mu,gamma_tau,upsilon_mu,upsilon_tau";
  std::string set_spec;
  std::string dyadic_spec;
  unsigned rho_n = 0;
  std::vector<std::string> only;
  std::vector<std::string> systems;
  bool corrupt = false;

  app.add_option("--system", systems, "vnk, gw or lebesgue (check: optional filter, repeatable)")
      ->check(CLI::IsMember({"vnk", "gw", "lebesgue"}));
  app.add_option("--p", c.p, "Gaspard-Wang exponent (p < -1)");
  app.add_option("--eps", c.eps, "scales: 2^a..2^b or a comma list");
  app.add_option("--q", c.q, "orders: a..b[:step] or a comma list");
  app.add_option("--theta", c.theta, "grid origins as fractions of eps in [0,1), comma list");
  app.add_option("--families", families, "comma list of partition families");
  app.add_option("--samples", c.samples, "Monte Carlo sample count");
  app.add_option("--cap", c.cap, "orbit cap");
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--out", c.out, "output directory for CSV files");
  app.add_option("--threads", c.threads, "worker threads (0: all cores)");
  app.add_option("--set", set_spec, "returns: interval lo,hi");
  app.add_option("--dyadic", dyadic_spec, "returns: vN-K dyadic box n,j (exact)");
  app.add_option("--n", rho_n, "rho: dyadic order");
  app.add_option("--only", only, "check: run only these criteria");
  app.add_flag("--corrupt-rho-table", corrupt, "fault injection: perturb the rho formula")->group("");

  auto* dims = app.add_subcommand("dims", "partition functions and fitted dimensions");
  auto* returns = app.add_subcommand("returns", "return-time law of a set (--set or --dyadic)");
  auto* rho = app.add_subcommand("rho", "enlarged-box return counts: formula vs enumeration (--n)");
  auto* check = app.add_subcommand("check", "run the validation suite");
  auto* report = app.add_subcommand("report", "render saved CSV results from --out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (c.threads > 0) omp_set_num_threads(c.threads);

  const auto usage = [](const std::string& msg) {
    std::cerr << msg << "\nRun with --help for more information.\n";
    return kExitUsage;
  };
  const bool needs_system = *dims || *returns;
  if (needs_system) {
    if (systems.empty()) return usage("--system is required");
    if (systems.size() > 1) return usage("--system takes one value here");
    c.system = systems.front();
  }
  try {
    if (*dims) return cmd_dims(c, families);
    if (*returns) {
      if (set_spec.empty() == dyadic_spec.empty()) return usage("returns needs exactly one of --set, --dyadic");
      return cmd_returns(c, set_spec, dyadic_spec);
    }
    if (*rho) {
      if (rho_n == 0) return usage("rho needs --n");
      return cmd_rho(c.out, rho_n);
    }
    if (*check) return cmd_check(c, only, systems, corrupt);
    if (*report) {
      if (c.out.empty()) return usage("report needs --out");
      return cmd_report(c.out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return kExitRange;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitRange;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
