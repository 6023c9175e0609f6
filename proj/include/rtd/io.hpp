#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rtd/oracles.hpp"
#include "rtd/partition.hpp"
#include "rtd/recurrence.hpp"
#include "rtd/scaling.hpp"
#include "rtd/types.hpp"

namespace rtd {

inline constexpr const char* kCsvMagic = "# recurrence-dims v1";

// 12 significant digits; "inf" for the infinity marker
std::string format_real(double v);
std::string format_extended(const ExtendedReal& v);
double parse_real(const std::string& s);
ExtendedReal parse_extended(const std::string& s);

// A schema-tagged table of string cells. Text form:
//   # recurrence-dims v1 schema=<name>
//   <comma-separated header>
//   <rows, RFC 4180 quoting where needed>
struct CsvTable {
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& os, const CsvTable& table);
std::string to_csv_text(const CsvTable& table);
// ConfigError on a missing magic line, a bad quote or a ragged row
CsvTable read_csv(std::istream& is);
CsvTable parse_csv_text(const std::string& text);

// typed schemas; the *_from_csv functions check schema and columns
CsvTable partition_to_csv(const std::vector<PartitionSample>& rows);
std::vector<PartitionSample> partition_from_csv(const CsvTable& t);
CsvTable dimensions_to_csv(const std::vector<DimensionEstimate>& rows);
std::vector<DimensionEstimate> dimensions_from_csv(const CsvTable& t);
CsvTable audits_to_csv(const std::vector<InequalityAudit>& rows);
std::vector<InequalityAudit> audits_from_csv(const CsvTable& t);
CsvTable distribution_to_csv(const ReturnDistribution& d);
ReturnDistribution distribution_from_csv(const CsvTable& t);
CsvTable validation_to_csv(const ValidationReport& r);
CsvTable rho_to_csv(unsigned n, const RhoTable& formula, const RhoTable& brute);

// "2^-4..2^-14" (every exponent), "0.1,0.05" or a single value; strictly decreasing
std::vector<double> parse_eps_spec(const std::string& spec);
// "a..b" (step 0.5), "a..b:step", or a comma list
std::vector<double> parse_q_spec(const std::string& spec);
std::vector<double> parse_real_list(const std::string& spec);

// q-by-family table of fitted dimensions as aligned text
std::string render_spectrum(const std::vector<DimensionEstimate>& estimates);
std::string render_validation(const ValidationReport& r);

}  // namespace rtd
