#include "modzero/io.hpp"

#include <cctype>
#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "modzero/errors.hpp"

namespace modzero {
namespace {

using nlohmann::json;

std::string field(const std::vector<std::string>& row, std::size_t i) { return i < row.size() ? row[i] : std::string(); }

std::optional<int> parse_index(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stoi(s);
}

void require_header(const CsvTable& table, const std::vector<std::string>& expected, const char* what) {
  if (table.header != expected) throw InvalidArgument(std::string(what) + ": unexpected CSV header");
}

json index_json(const std::optional<int>& idx) { return idx ? json(*idx) : json(nullptr); }

std::optional<int> index_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<int>();
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(std::string_view text) {
  const std::string s(text);
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  // strtod keeps subnormals (reporting ERANGE) where stod throws.
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || std::isspace(static_cast<unsigned char>(s[0])) || end != s.c_str() + s.size() ||
      (errno == ERANGE && std::isinf(v))) {
    throw InvalidArgument("not a number: '" + s + "'");
  }
  return v;
}

std::string optional_index(const std::optional<int>& idx) { return idx ? std::to_string(*idx) : std::string(); }

std::string write_csv(const CsvTable& table) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
  return out;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != table.header.size()) throw InvalidArgument("CSV row width does not match header");
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

std::vector<std::string> zeros_csv_columns() {
  return {"k", "kind", "eigen_index", "re", "im", "multiplicity", "stab_weight", "abs_z", "residual_log", "status"};
}

std::vector<std::string> measure_csv_columns() {
  return {"k", "kind", "eigen_index", "box_id", "x_lo", "x_hi", "y_lo", "y_hi", "empirical", "volume", "diff", "status"};
}

std::vector<std::string> gamma_csv_columns() { return {"k", "ratio", "theta", "poisson_cdf"}; }

std::vector<std::string> supnorm_csv_columns() {
  return {"k", "kind", "eigen_index", "log_petersson_norm", "sup", "argmax_re", "argmax_im",
          "max_ratio_to_bound", "max_siegel_ratio_to_bound", "siegel_over_petersson"};
}

std::vector<ZeroRow> zero_rows(const ZeroSet& zs) {
  std::vector<ZeroRow> rows;
  for (const auto& r : zs.records) rows.push_back({zs.weight, zs.kind, zs.eigen_index, r, "ok"});
  return rows;
}

CsvTable zeros_table(const std::vector<ZeroRow>& rows) {
  CsvTable t{zeros_csv_columns(), {}};
  for (const auto& r : rows) {
    std::vector<std::string> cells{std::to_string(r.k), to_string(r.kind), optional_index(r.eigen_index)};
    if (r.zero) {
      const auto& z = *r.zero;
      cells.insert(cells.end(), {format_real(z.point.x), format_real(z.point.y), std::to_string(z.multiplicity),
                                 z.stab_weight.get_str(), format_real(std::hypot(z.point.x, z.point.y)),
                                 format_real(z.residual_log)});
    } else {
      cells.insert(cells.end(), 6, std::string());
    }
    cells.push_back(r.status);
    t.rows.push_back(std::move(cells));
  }
  return t;
}

std::vector<ZeroRow> parse_zeros_table(const CsvTable& table) {
  require_header(table, zeros_csv_columns(), "zeros CSV");
  std::vector<ZeroRow> rows;
  for (const auto& c : table.rows) {
    ZeroRow r;
    r.k = std::stoi(c[0]);
    r.kind = form_kind_from_string(c[1]);
    r.eigen_index = parse_index(c[2]);
    r.status = field(c, 9);
    if (!c[3].empty()) {
      ZeroRecord z;
      z.point = {parse_real(c[3]), parse_real(c[4])};
      z.multiplicity = std::stoi(c[5]);
      z.stab_weight = mpq_class(c[6]);
      z.residual_log = parse_real(c[8]);
      r.zero = z;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<MeasureCsvRow> measure_rows(const MeasureReport& report) {
  std::vector<MeasureCsvRow> rows;
  if (report.status != "ok") {
    rows.push_back({report.weight, report.kind, report.eigen_index, std::nullopt, report.status});
    return rows;
  }
  for (const auto& r : report.rows) rows.push_back({report.weight, report.kind, report.eigen_index, r, "ok"});
  return rows;
}

CsvTable measure_table(const std::vector<MeasureCsvRow>& rows) {
  CsvTable t{measure_csv_columns(), {}};
  for (const auto& r : rows) {
    std::vector<std::string> cells{std::to_string(r.k), to_string(r.kind), optional_index(r.eigen_index)};
    if (r.row) {
      const auto& m = *r.row;
      cells.insert(cells.end(), {std::to_string(m.box_id), format_real(m.box.x_lo), format_real(m.box.x_hi),
                                 format_real(m.box.y_lo), format_real(m.box.y_hi), format_real(m.empirical),
                                 format_real(m.volume), format_real(m.diff)});
    } else {
      cells.insert(cells.end(), 8, std::string());
    }
    cells.push_back(r.status);
    t.rows.push_back(std::move(cells));
  }
  return t;
}

std::vector<MeasureCsvRow> parse_measure_table(const CsvTable& table) {
  require_header(table, measure_csv_columns(), "measure CSV");
  std::vector<MeasureCsvRow> rows;
  for (const auto& c : table.rows) {
    MeasureCsvRow r;
    r.k = std::stoi(c[0]);
    r.kind = form_kind_from_string(c[1]);
    r.eigen_index = parse_index(c[2]);
    r.status = field(c, 11);
    if (!c[3].empty()) {
      MeasureRow m;
      m.box_id = std::stoi(c[3]);
      m.box = {parse_real(c[4]), parse_real(c[5]), parse_real(c[6]), parse_real(c[7])};
      m.empirical = parse_real(c[8]);
      m.volume = parse_real(c[9]);
      m.diff = parse_real(c[10]);
      r.row = m;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

GammaRow gamma_row(const GammaIncReport& r) {
  return {r.k, static_cast<double>(r.ratio), static_cast<double>(r.theta), static_cast<double>(r.poisson_cdf)};
}

CsvTable gamma_table(const std::vector<GammaRow>& rows) {
  CsvTable t{gamma_csv_columns(), {}};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.k), format_real(r.ratio), format_real(r.theta), format_real(r.poisson_cdf)});
  }
  return t;
}

std::vector<GammaRow> parse_gamma_table(const CsvTable& table) {
  require_header(table, gamma_csv_columns(), "gamma CSV");
  std::vector<GammaRow> rows;
  for (const auto& c : table.rows) rows.push_back({std::stol(c[0]), parse_real(c[1]), parse_real(c[2]), parse_real(c[3])});
  return rows;
}

std::vector<SupnormCsvRow> supnorm_rows(const SupMassResult& result, const std::vector<FormNumeric>& forms) {
  std::vector<SupnormCsvRow> rows;
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& r = result.rows[i];
    SupnormCsvRow row;
    row.k = r.weight;
    row.kind = r.kind;
    row.eigen_index = r.eigen_index;
    row.log_petersson_norm = i < forms.size() && forms[i].petersson_norm
                                 ? static_cast<double>(std::log(*forms[i].petersson_norm))
                                 : std::numeric_limits<double>::quiet_NaN();
    row.sup = static_cast<double>(r.sup);
    row.argmax_re = r.argmax.x;
    row.argmax_im = r.argmax.y;
    row.max_ratio_to_bound = static_cast<double>(r.max_ratio_to_bound);
    row.max_siegel_ratio_to_bound = static_cast<double>(r.max_siegel_ratio_to_bound);
    row.siegel_over_petersson = static_cast<double>(r.siegel_over_petersson);
    rows.push_back(row);
  }
  return rows;
}

CsvTable supnorm_table(const std::vector<SupnormCsvRow>& rows) {
  CsvTable t{supnorm_csv_columns(), {}};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.k), to_string(r.kind), optional_index(r.eigen_index),
                      format_real(r.log_petersson_norm), format_real(r.sup), format_real(r.argmax_re),
                      format_real(r.argmax_im), format_real(r.max_ratio_to_bound),
                      format_real(r.max_siegel_ratio_to_bound), format_real(r.siegel_over_petersson)});
  }
  return t;
}

std::vector<SupnormCsvRow> parse_supnorm_table(const CsvTable& table) {
  require_header(table, supnorm_csv_columns(), "supnorm CSV");
  std::vector<SupnormCsvRow> rows;
  for (const auto& c : table.rows) {
    SupnormCsvRow r;
    r.k = std::stoi(c[0]);
    r.kind = form_kind_from_string(c[1]);
    r.eigen_index = parse_index(c[2]);
    r.log_petersson_norm = parse_real(c[3]);
    r.sup = parse_real(c[4]);
    r.argmax_re = parse_real(c[5]);
    r.argmax_im = parse_real(c[6]);
    r.max_ratio_to_bound = parse_real(c[7]);
    r.max_siegel_ratio_to_bound = parse_real(c[8]);
    r.siegel_over_petersson = parse_real(c[9]);
    rows.push_back(r);
  }
  return rows;
}

std::string summary_json(const std::vector<SummaryEntry>& entries) {
  json j;
  j["schema"] = kSchema;
  auto& forms = j["forms"] = json::array();
  for (const auto& e : entries) {
    forms.push_back({{"id", e.id},
                     {"k", e.k},
                     {"kind", to_string(e.kind)},
                     {"eigen_index", index_json(e.eigen_index)},
                     {"sup_diff", e.sup_diff},
                     {"status", e.status}});
  }
  return j.dump(1) + "\n";
}

std::vector<SummaryEntry> parse_summary_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    if (j.value("schema", std::string()) != kSchema) throw InvalidArgument("summary JSON: schema is not modzero/1");
    std::vector<SummaryEntry> out;
    for (const auto& f : j.at("forms")) {
      out.push_back({f.at("id").get<std::string>(), f.at("k").get<int>(),
                     form_kind_from_string(f.at("kind").get<std::string>()), index_from_json(f.at("eigen_index")),
                     f.at("sup_diff").get<double>(), f.at("status").get<std::string>()});
    }
    return out;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("summary JSON: ") + e.what());
  }
}

std::string identity_json(const std::vector<IdentityCheck>& checks) {
  json j;
  j["schema"] = kSchema;
  auto& arr = j["checks"] = json::array();
  for (const auto& c : checks) {
    arr.push_back({{"k", c.weight},
                   {"kind", to_string(c.kind)},
                   {"eigen_index", index_json(c.eigen_index)},
                   {"phi_center", {c.phi.center.x, c.phi.center.y}},
                   {"phi_radius", c.phi.radius},
                   {"lhs", c.lhs},
                   {"rhs", c.rhs},
                   {"diff", c.diff},
                   {"rhs_invariant", c.rhs_invariant},
                   {"diff_invariant", c.diff_invariant},
                   {"unfolded_volume", c.unfolded_volume},
                   {"folded_volume", c.folded_volume},
                   {"quad_eps", c.quad_eps}});
  }
  return j.dump(1) + "\n";
}

std::vector<IdentityCheck> parse_identity_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    if (j.value("schema", std::string()) != kSchema) throw InvalidArgument("identity JSON: schema is not modzero/1");
    std::vector<IdentityCheck> out;
    for (const auto& c : j.at("checks")) {
      IdentityCheck ic;
      ic.weight = c.at("k").get<int>();
      ic.kind = form_kind_from_string(c.at("kind").get<std::string>());
      ic.eigen_index = index_from_json(c.at("eigen_index"));
      ic.phi.center = {c.at("phi_center").at(0).get<double>(), c.at("phi_center").at(1).get<double>()};
      ic.phi.radius = c.at("phi_radius").get<double>();
      ic.lhs = c.at("lhs").get<double>();
      ic.rhs = c.at("rhs").get<double>();
      ic.diff = c.at("diff").get<double>();
      ic.rhs_invariant = c.at("rhs_invariant").get<double>();
      ic.diff_invariant = c.at("diff_invariant").get<double>();
      ic.unfolded_volume = c.at("unfolded_volume").get<double>();
      ic.folded_volume = c.at("folded_volume").get<double>();
      ic.quad_eps = c.at("quad_eps").get<double>();
      out.push_back(ic);
    }
    return out;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("identity JSON: ") + e.what());
  }
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

}  // namespace modzero
