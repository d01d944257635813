#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modzero/incgamma.hpp"
#include "modzero/measure.hpp"
#include "modzero/potential.hpp"
#include "modzero/zerofind.hpp"

namespace modzero {

inline constexpr const char* kSchema = "modzero/1";

/// Shortest round-trip-safe text for a double (17 significant digits).
std::string format_real(double v);
double parse_real(std::string_view text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Comma-separated, header row, LF line endings; fields never contain commas.
std::string write_csv(const CsvTable& table);
CsvTable parse_csv(std::string_view text);

std::vector<std::string> zeros_csv_columns();
std::vector<std::string> measure_csv_columns();
std::vector<std::string> gamma_csv_columns();
std::vector<std::string> supnorm_csv_columns();

/// One row of the zeros CSV; numeric fields are absent when status is not "ok".
struct ZeroRow {
  int k = 0;
  FormKind kind = FormKind::Custom;
  std::optional<int> eigen_index;
  std::optional<ZeroRecord> zero;
  std::string status = "ok";
};

/// Forms with no zeros in F contribute no rows; failures contribute one status row.
std::vector<ZeroRow> zero_rows(const ZeroSet& zs);
CsvTable zeros_table(const std::vector<ZeroRow>& rows);
std::vector<ZeroRow> parse_zeros_table(const CsvTable& table);

struct MeasureCsvRow {
  int k = 0;
  FormKind kind = FormKind::Custom;
  std::optional<int> eigen_index;
  std::optional<MeasureRow> row;
  std::string status = "ok";
};

std::vector<MeasureCsvRow> measure_rows(const MeasureReport& report);
CsvTable measure_table(const std::vector<MeasureCsvRow>& rows);
std::vector<MeasureCsvRow> parse_measure_table(const CsvTable& table);

struct GammaRow {
  long k = 0;
  double ratio = 0;
  double theta = 0;
  double poisson_cdf = 0;
};

GammaRow gamma_row(const GammaIncReport& r);
CsvTable gamma_table(const std::vector<GammaRow>& rows);
std::vector<GammaRow> parse_gamma_table(const CsvTable& table);

struct SupnormCsvRow {
  int k = 0;
  FormKind kind = FormKind::Eigenform;
  std::optional<int> eigen_index;
  double log_petersson_norm = 0;
  double sup = 0;
  double argmax_re = 0;
  double argmax_im = 0;
  double max_ratio_to_bound = 0;
  double max_siegel_ratio_to_bound = 0;
  double siegel_over_petersson = 0;
};

std::vector<SupnormCsvRow> supnorm_rows(const SupMassResult& result, const std::vector<FormNumeric>& forms);
CsvTable supnorm_table(const std::vector<SupnormCsvRow>& rows);
std::vector<SupnormCsvRow> parse_supnorm_table(const CsvTable& table);

struct SummaryEntry {
  std::string id;
  int k = 0;
  FormKind kind = FormKind::Custom;
  std::optional<int> eigen_index;
  double sup_diff = 0;
  std::string status = "ok";
};

/// {"schema", "forms": [{"id", "k", "kind", "eigen_index", "sup_diff", "status"}]}.
std::string summary_json(const std::vector<SummaryEntry>& entries);
std::vector<SummaryEntry> parse_summary_json(std::string_view text);

/// {"schema", "checks": [{k, kind, eigen_index, phi_center, phi_radius, lhs, rhs, diff, quad_eps, ...}]}.
std::string identity_json(const std::vector<IdentityCheck>& checks);
std::vector<IdentityCheck> parse_identity_json(std::string_view text);

std::string optional_index(const std::optional<int>& idx);

/// 64-bit FNV-1a of the text, as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

}  // namespace modzero
