#include "rtd/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace rtd {

namespace {

bool needs_quotes(const std::string& s) { return s.find_first_of(",\"\n\r") != std::string::npos; }

void write_cell(std::ostream& os, const std::string& s) {
  if (!needs_quotes(s)) {
    os << s;
    return;
  }
  os << '"';
  for (char c : s) {
    if (c == '"') os << '"';
    os << c;
  }
  os << '"';
}

// splits one logical record; quoted cells may span lines
bool read_record(std::istream& is, std::vector<std::string>& cells) {
  cells.clear();
  std::string cell;
  bool quoted = false;
  bool any = false;
  char c;
  while (is.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (is.peek() == '"') {
          is.get(c);
          cell += '"';
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      if (!cell.empty()) throw ConfigError("csv: quote inside unquoted cell");
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\n') {
      cells.push_back(std::move(cell));
      return true;
    } else if (c != '\r') {
      cell += c;
    }
  }
  if (quoted) throw ConfigError("csv: unterminated quote");
  if (any) cells.push_back(std::move(cell));
  return any;
}

void expect_schema(const CsvTable& t, const std::string& schema, const std::vector<std::string>& columns) {
  if (t.schema != schema) throw ConfigError("csv: expected schema " + schema + ", found " + t.schema);
  if (t.columns != columns) throw ConfigError("csv: unexpected columns for schema " + schema);
}

std::string fmt_bool(bool b) { return b ? "1" : "0"; }

bool parse_bool(const std::string& s) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw ConfigError("csv: expected 0 or 1, found '" + s + "'");
}

std::uint64_t parse_uint(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("expected a non-negative integer, found '" + s + "'");
  }
  return std::strtoull(s.c_str(), nullptr, 10);
}

Family family_or_throw(const std::string& s) {
  const auto f = parse_family(s);
  if (!f) throw ConfigError("unknown family '" + s + "'");
  return *f;
}

Variant variant_or_throw(const std::string& s) {
  const auto v = parse_variant(s);
  if (!v) throw ConfigError("unknown variant '" + s + "'");
  return *v;
}

Verdict parse_verdict(const std::string& s) {
  for (Verdict v : {Verdict::kHolds, Verdict::kViolated, Verdict::kInconclusive}) {
    if (verdict_name(v) == s) return v;
  }
  throw ConfigError("unknown verdict '" + s + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

// "2^-k" or a plain number
double parse_eps_value(const std::string& s) {
  if (s.rfind("2^", 0) == 0) return std::ldexp(1.0, static_cast<int>(std::lround(parse_real(s.substr(2)))));
  return parse_real(s);
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_extended(const ExtendedReal& v) { return v.is_infinite() ? "inf" : format_real(v.value()); }

double parse_real(const std::string& s) {
  const std::string t = trim(s);
  if (t == "inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  if (t == "nan") return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) throw ConfigError("expected a number, found '" + s + "'");
  return v;
}

ExtendedReal parse_extended(const std::string& s) {
  if (trim(s) == "inf") return ExtendedReal::infinity();
  return ExtendedReal(parse_real(s));
}

void write_csv(std::ostream& os, const CsvTable& table) {
  os << kCsvMagic << " schema=" << table.schema << '\n';
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      write_cell(os, cells[i]);
    }
    os << '\n';
  };
  line(table.columns);
  for (const auto& r : table.rows) line(r);
}

std::string to_csv_text(const CsvTable& table) {
  std::ostringstream os;
  write_csv(os, table);
  return os.str();
}

CsvTable read_csv(std::istream& is) {
  std::string magic;
  if (!std::getline(is, magic)) throw ConfigError("csv: empty input");
  const std::string prefix = std::string(kCsvMagic) + " schema=";
  if (magic.rfind(prefix, 0) != 0) throw ConfigError("csv: missing '" + std::string(kCsvMagic) + "' header");
  CsvTable t;
  t.schema = magic.substr(prefix.size());
  if (!read_record(is, t.columns)) throw ConfigError("csv: missing column header");
  std::vector<std::string> cells;
  while (read_record(is, cells)) {
    if (cells.size() != t.columns.size()) throw ConfigError("csv: ragged row");
    t.rows.push_back(cells);
  }
  return t;
}

CsvTable parse_csv_text(const std::string& text) {
  std::istringstream is(text);
  return read_csv(is);
}

// ---------------------------------------------------------------------------

namespace {
const std::vector<std::string> kPartitionColumns = {"family", "variant", "theta", "epsilon", "q",
                                                     "value", "std_error", "censored_fraction", "divergent"};
const std::vector<std::string> kDimensionColumns = {"family", "variant",  "theta",    "q",       "dimension",
                                                     "intercept", "residual_rms", "slope_se", "eps_min", "eps_max",
                                                     "points", "divergent", "spread"};
const std::vector<std::string> kAuditColumns = {"relation", "q",      "eps_min",   "eps_max", "left",
                                                 "right",    "margin", "tolerance", "verdict"};
const std::vector<std::string> kDistributionColumns = {"tau", "mass"};
const std::vector<std::string> kValidationColumns = {"criterion", "expected", "observed", "tolerance", "verdict"};
}  // namespace

CsvTable partition_to_csv(const std::vector<PartitionSample>& rows) {
  CsvTable t{"partition", kPartitionColumns, {}};
  for (const auto& s : rows) {
    t.rows.push_back({family_name(s.family), variant_name(s.variant), format_real(s.theta), format_real(s.epsilon),
                      format_real(s.q), format_extended(s.value), format_real(s.std_error),
                      format_real(s.censored_fraction), fmt_bool(s.divergent)});
  }
  return t;
}

std::vector<PartitionSample> partition_from_csv(const CsvTable& t) {
  expect_schema(t, "partition", kPartitionColumns);
  std::vector<PartitionSample> out;
  for (const auto& r : t.rows) {
    PartitionSample s;
    s.family = family_or_throw(r[0]);
    s.variant = variant_or_throw(r[1]);
    s.theta = parse_real(r[2]);
    s.epsilon = parse_real(r[3]);
    s.q = parse_real(r[4]);
    s.value = parse_extended(r[5]);
    s.std_error = parse_real(r[6]);
    s.censored_fraction = parse_real(r[7]);
    s.divergent = parse_bool(r[8]);
    out.push_back(s);
  }
  return out;
}

CsvTable dimensions_to_csv(const std::vector<DimensionEstimate>& rows) {
  CsvTable t{"dimensions", kDimensionColumns, {}};
  for (const auto& d : rows) {
    t.rows.push_back({family_name(d.family), variant_name(d.variant), format_real(d.theta), format_real(d.q),
                      format_extended(d.slope), format_real(d.intercept), format_real(d.residual_rms),
                      format_real(d.slope_se), format_real(d.eps_min), format_real(d.eps_max),
                      std::to_string(d.points), fmt_bool(d.divergent), format_real(d.spread)});
  }
  return t;
}

std::vector<DimensionEstimate> dimensions_from_csv(const CsvTable& t) {
  expect_schema(t, "dimensions", kDimensionColumns);
  std::vector<DimensionEstimate> out;
  for (const auto& r : t.rows) {
    DimensionEstimate d;
    d.family = family_or_throw(r[0]);
    d.variant = variant_or_throw(r[1]);
    d.theta = parse_real(r[2]);
    d.q = parse_real(r[3]);
    d.slope = parse_extended(r[4]);
    d.intercept = parse_real(r[5]);
    d.residual_rms = parse_real(r[6]);
    d.slope_se = parse_real(r[7]);
    d.eps_min = parse_real(r[8]);
    d.eps_max = parse_real(r[9]);
    d.points = parse_uint(r[10]);
    d.divergent = parse_bool(r[11]);
    d.spread = parse_real(r[12]);
    out.push_back(d);
  }
  return out;
}

CsvTable audits_to_csv(const std::vector<InequalityAudit>& rows) {
  CsvTable t{"audits", kAuditColumns, {}};
  for (const auto& a : rows) {
    t.rows.push_back({a.relation, format_real(a.q), format_real(a.eps_min), format_real(a.eps_max),
                      format_extended(a.left), format_extended(a.right), format_real(a.margin),
                      format_real(a.tolerance), verdict_name(a.verdict)});
  }
  return t;
}

std::vector<InequalityAudit> audits_from_csv(const CsvTable& t) {
  expect_schema(t, "audits", kAuditColumns);
  std::vector<InequalityAudit> out;
  for (const auto& r : t.rows) {
    InequalityAudit a;
    a.relation = r[0];
    a.q = parse_real(r[1]);
    a.eps_min = parse_real(r[2]);
    a.eps_max = parse_real(r[3]);
    a.left = parse_extended(r[4]);
    a.right = parse_extended(r[5]);
    a.margin = parse_real(r[6]);
    a.tolerance = parse_real(r[7]);
    a.verdict = parse_verdict(r[8]);
    out.push_back(a);
  }
  return out;
}

// return times first, then keyword rows: censored, cap, samples, measure
CsvTable distribution_to_csv(const ReturnDistribution& d) {
  CsvTable t{"distribution", kDistributionColumns, {}};
  for (const auto& [tau, m] : d.mass) t.rows.push_back({std::to_string(tau), format_real(m)});
  t.rows.push_back({"censored", format_real(d.censored_mass)});
  t.rows.push_back({"cap", std::to_string(d.cap)});
  t.rows.push_back({"samples", std::to_string(d.sample_count)});
  t.rows.push_back({"measure", format_real(d.target_set_measure)});
  return t;
}

ReturnDistribution distribution_from_csv(const CsvTable& t) {
  expect_schema(t, "distribution", kDistributionColumns);
  ReturnDistribution d;
  for (const auto& r : t.rows) {
    if (r[0] == "censored") {
      d.censored_mass = parse_real(r[1]);
    } else if (r[0] == "cap") {
      d.cap = parse_uint(r[1]);
    } else if (r[0] == "samples") {
      d.sample_count = parse_uint(r[1]);
    } else if (r[0] == "measure") {
      d.target_set_measure = parse_real(r[1]);
    } else {
      d.mass[parse_uint(r[0])] = parse_real(r[1]);
    }
  }
  return d;
}

CsvTable validation_to_csv(const ValidationReport& r) {
  CsvTable t{"validation", kValidationColumns, {}};
  for (const auto& e : r.entries) {
    t.rows.push_back({e.id, e.expected, e.observed, format_real(e.tolerance), outcome_name(e.outcome)});
  }
  return t;
}

CsvTable rho_to_csv(unsigned n, const RhoTable& formula, const RhoTable& brute) {
  CsvTable t{"rho", {"n", "m", "formula", "enumerated"}, {}};
  std::set<std::uint64_t> ms;
  for (const auto& [m, c] : formula) ms.insert(m);
  for (const auto& [m, c] : brute) ms.insert(m);
  const auto get = [](const RhoTable& tab, std::uint64_t m) {
    const auto it = tab.find(m);
    return it == tab.end() ? std::uint64_t{0} : it->second;
  };
  for (std::uint64_t m : ms) {
    t.rows.push_back({std::to_string(n), std::to_string(m), std::to_string(get(formula, m)),
                      brute.empty() ? "" : std::to_string(get(brute, m))});
  }
  return t;
}

// ---------------------------------------------------------------------------

std::vector<double> parse_real_list(const std::string& spec) {
  std::vector<double> out;
  for (const auto& item : split(spec, ',')) {
    if (!item.empty()) out.push_back(parse_real(item));
  }
  if (out.empty()) throw ConfigError("empty list '" + spec + "'");
  return out;
}

std::vector<double> parse_eps_spec(const std::string& spec) {
  std::vector<double> out;
  const auto dots = spec.find("..");
  if (dots != std::string::npos) {
    const std::string a = trim(spec.substr(0, dots));
    const std::string b = trim(spec.substr(dots + 2));
    if (a.rfind("2^", 0) != 0 || b.rfind("2^", 0) != 0) throw ConfigError("eps range must read 2^a..2^b");
    const long ea = std::lround(parse_real(a.substr(2)));
    const long eb = std::lround(parse_real(b.substr(2)));
    const long hi = std::max(ea, eb);
    const long lo = std::min(ea, eb);
    for (long e = hi; e >= lo; --e) out.push_back(std::ldexp(1.0, static_cast<int>(e)));
  } else {
    for (const auto& item : split(spec, ',')) {
      if (!item.empty()) out.push_back(parse_eps_value(item));
    }
  }
  if (out.empty()) throw ConfigError("empty eps spec");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] > 0.0) || !std::isfinite(out[i])) throw ConfigError("eps values must be positive");
    if (i && !(out[i] < out[i - 1])) throw ConfigError("eps values must be strictly decreasing");
  }
  return out;
}

std::vector<double> parse_q_spec(const std::string& spec) {
  const auto dots = spec.find("..");
  if (dots == std::string::npos) {
    auto out = parse_real_list(spec);
    for (double q : out) {
      if (!std::isfinite(q)) throw ConfigError("q values must be finite");
    }
    return out;
  }
  const std::string rest = spec.substr(dots + 2);
  const auto colon = rest.find(':');
  const double a = parse_real(spec.substr(0, dots));
  const double b = parse_real(rest.substr(0, colon));
  const double step = colon == std::string::npos ? 0.5 : parse_real(rest.substr(colon + 1));
  if (!(step > 0.0) || !std::isfinite(a) || !std::isfinite(b) || b < a) throw ConfigError("bad q range '" + spec + "'");
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
  for (long i = 0; i <= count; ++i) out.push_back(a + static_cast<double>(i) * step);
  return out;
}

std::string render_spectrum(const std::vector<DimensionEstimate>& estimates) {
  // one column per (family, theta); the log variant fills q = 1
  std::vector<std::pair<Family, double>> cols;
  std::set<double> qs;
  std::map<std::pair<std::pair<Family, double>, double>, const DimensionEstimate*> cell;
  for (const auto& d : estimates) {
    const auto key = std::make_pair(d.family, d.theta);
    if (std::find(cols.begin(), cols.end(), key) == cols.end()) cols.push_back(key);
    qs.insert(d.q);
    cell[{key, d.q}] = &d;
  }
  std::sort(cols.begin(), cols.end());
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%8s", "q");
  os << buf;
  for (const auto& [f, th] : cols) {
    std::string name = family_name(f);
    if (th != 0.0) name += "@" + format_real(th);
    std::snprintf(buf, sizeof buf, " %16s", name.c_str());
    os << buf;
  }
  os << '\n';
  for (double q : qs) {
    std::snprintf(buf, sizeof buf, "%8s", format_real(q).c_str());
    os << buf;
    for (const auto& c : cols) {
      const auto it = cell.find({c, q});
      std::string v = "-";
      if (it != cell.end()) {
        const auto& d = *it->second;
        if (d.slope.is_infinite()) {
          v = "inf";
        } else {
          std::snprintf(buf, sizeof buf, "%.4f", d.slope.value());
          v = buf;
        }
        if (d.nonconvergent() && !d.divergent) v += "*";
      }
      std::snprintf(buf, sizeof buf, " %16s", v.c_str());
      os << buf;
    }
    os << '\n';
  }
  os << "(* two-point slope spread above " << format_real(kNonconvergentSpread) << ")\n";
  return os.str();
}

std::string render_validation(const ValidationReport& r) {
  std::ostringstream os;
  for (const auto& e : r.entries) {
    std::string tag = outcome_name(e.outcome);
    std::transform(tag.begin(), tag.end(), tag.begin(), [](unsigned char c) { return std::toupper(c); });
    os << '[' << tag << "] " << e.id;
    if (!e.expected.empty()) os << ": expected " << e.expected;
    if (!e.observed.empty()) os << "; observed " << e.observed;
    os << '\n';
    for (const auto& d : e.details) os << "    " << d << '\n';
  }
  return os.str();
}

}  // namespace rtd
