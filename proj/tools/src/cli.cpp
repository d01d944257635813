#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "modzero/errors.hpp"
#include "modzero/incgamma.hpp"
#include "modzero/io.hpp"
#include "modzero/measure.hpp"
#include "modzero/potential.hpp"
#include "modzero/qseries.hpp"
#include "modzero/zerofind.hpp"

namespace modzero::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string status_of(const std::exception& e) {
  if (dynamic_cast<const ValenceMismatch*>(&e)) return "valence-mismatch";
  if (dynamic_cast<const NonConvergence*>(&e)) return "non-convergence";
  if (dynamic_cast<const InsufficientTruncation*>(&e)) return "insufficient-truncation";
  if (dynamic_cast<const NearDegenerateSpectrum*>(&e)) return "near-degenerate-spectrum";
  if (dynamic_cast<const EmptyZeroSet*>(&e)) return "empty-zero-set";
  return "error";
}

// Runs fn(items[i]) on `jobs` threads; results keep the input order.
template <class T, class Fn>
auto parallel_map(const std::vector<T>& items, int jobs, Fn fn) {
  using R = decltype(fn(items.front()));
  std::vector<R> out(items.size());
  std::vector<std::exception_ptr> errors(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      try {
        out[i] = fn(items[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(items.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

bool wants(const RunConfig& c, FormKind kind) { return std::find(c.kinds.begin(), c.kinds.end(), kind) != c.kinds.end(); }

std::string form_file_name(const FormNumeric& f) { return f.id() + ".json"; }

// Forms of one weight plus a status per requested form kind that could not be built.
struct WeightForms {
  int k = 0;
  std::vector<FormNumeric> forms;
  std::vector<std::pair<std::string, std::string>> failures;
};

WeightForms build_weight(int k, const RunConfig& c) {
  WeightForms w;
  w.k = k;
  try {
    w.forms = forms_for_weight(k, c);
  } catch (const std::exception& e) {
    w.failures.emplace_back("k" + std::to_string(k), status_of(e));
    std::cerr << "modzero: weight " << k << ": " << e.what() << "\n";
  }
  return w;
}

std::vector<long> gamma_weights(const RunConfig& c) {
  std::vector<long> ks;
  for (int k : c.weights) ks.push_back(k);
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

}  // namespace

void RunConfig::validate() const {
  if (weights.empty()) throw InvalidArgument("no weights given");
  for (int k : weights) {
    if (k < 4 || k % 2) throw InvalidArgument("weights must be even and >= 4, got " + std::to_string(k));
  }
  if (kinds.empty()) throw InvalidArgument("no form kinds given");
  if (!(eps > 0 && eps <= 1e-2)) throw InvalidArgument("eps must lie in (0, 1e-2]");
  if (jobs < 1) throw InvalidArgument("jobs must be >= 1");
  if (precision_bits < 64) throw InvalidArgument("precision_bits must be >= 64");
  if (truncation && *truncation < 1) throw InvalidArgument("truncation must be >= 1");
  bump.validate();
  grid_from_spec(grid);
}

std::vector<int> parse_weights(const std::string& text) {
  std::set<int> ks;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    std::vector<int> fields;
    std::stringstream ps(part);
    std::string num;
    try {
      while (std::getline(ps, num, ':')) fields.push_back(std::stoi(num));
    } catch (const std::exception&) {
      throw InvalidArgument("bad weight list '" + text + "'");
    }
    if (fields.size() == 1) {
      ks.insert(fields[0]);
    } else if (fields.size() == 2 || fields.size() == 3) {
      const int step = fields.size() == 3 ? fields[2] : 2;
      if (step <= 0 || fields[1] < fields[0]) throw InvalidArgument("bad weight range '" + part + "'");
      for (int k = fields[0]; k <= fields[1]; k += step) ks.insert(k);
    } else {
      throw InvalidArgument("bad weight range '" + part + "'");
    }
  }
  return {ks.begin(), ks.end()};
}

std::vector<FormKind> parse_kinds(const std::string& text) {
  std::vector<FormKind> kinds;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    const FormKind kind = form_kind_from_string(part);
    if (kind == FormKind::Custom) throw InvalidArgument("custom forms cannot be generated from the command line");
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) kinds.push_back(kind);
  }
  std::sort(kinds.begin(), kinds.end());
  return kinds;
}

BumpFunction parse_bump(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) v.push_back(parse_real(part));
  if (v.size() != 3) throw InvalidArgument("bump must be 'x,y,r', got '" + text + "'");
  BumpFunction phi{{v[0], v[1]}, v[2]};
  phi.validate();
  return phi;
}

std::string config_json(const RunConfig& c) {
  json j;
  j["weights"] = c.weights;
  json kinds = json::array();
  for (auto kind : c.kinds) kinds.push_back(to_string(kind));
  j["kinds"] = kinds;
  j["precision_bits"] = c.precision_bits;
  j["truncation"] = c.truncation ? json(*c.truncation) : json(nullptr);
  j["eps"] = format_real(c.eps);
  j["grid"] = c.grid;
  j["bump"] = {format_real(c.bump.center.x), format_real(c.bump.center.y), format_real(c.bump.radius)};
  return j.dump();
}

std::string config_hash(const RunConfig& c) { return fnv1a_hex(config_json(c)); }

std::vector<FormNumeric> forms_for_weight(int k, const RunConfig& c) {
  std::vector<FormNumeric> forms;
  if (wants(c, FormKind::Eisenstein)) {
    const int n = c.truncation.value_or(default_form_truncation(k, FormKind::Eisenstein, c.precision_bits));
    forms.push_back(eisenstein_form(k, n, c.precision_bits));
  }
  if (wants(c, FormKind::Eigenform) && dim_cusp(k) > 0) {
    const int n = c.truncation.value_or(default_form_truncation(k, FormKind::Eigenform, c.precision_bits));
    for (auto& f : eigenforms(k, n, c.precision_bits)) forms.push_back(std::move(f));
  }
  return forms;
}

CommandResult cmd_forms(const RunConfig& c) {
  CommandResult result;
  const auto per_weight = parallel_map(c.weights, c.jobs, [&](int k) { return build_weight(k, c); });
  for (const auto& w : per_weight) {
    for (const auto& f : w.forms) {
      const fs::path path = c.out / "forms" / form_file_name(f);
      write_file(path, to_json(f));
      result.outputs.push_back(path);
      result.provenance.emplace_back(f.id(), "ok");
    }
    for (const auto& fail : w.failures) {
      result.provenance.push_back(fail);
      ++result.hard_failures;
    }
  }
  return result;
}

CommandResult cmd_zeros(const RunConfig& c) {
  struct Out {
    std::vector<ZeroRow> rows;
    std::vector<std::pair<std::string, std::string>> provenance;
    int failures = 0;
  };
  const auto per_weight = parallel_map(c.weights, c.jobs, [&](int k) {
    Out out;
    const auto w = build_weight(k, c);
    for (const auto& fail : w.failures) {
      out.provenance.push_back(fail);
      ++out.failures;
    }
    for (const auto& f : w.forms) {
      try {
        const auto zs = zeros_in_F(f);
        for (auto& r : zero_rows(zs)) out.rows.push_back(std::move(r));
        out.provenance.emplace_back(f.id(), "ok");
      } catch (const std::exception& e) {
        const std::string status = status_of(e);
        out.rows.push_back({f.weight, f.kind, f.eigen_index, std::nullopt, status});
        out.provenance.emplace_back(f.id(), status);
        ++out.failures;
        std::cerr << "modzero: " << f.id() << ": " << e.what() << "\n";
      }
    }
    return out;
  });
  CommandResult result;
  std::vector<ZeroRow> rows;
  for (const auto& o : per_weight) {
    rows.insert(rows.end(), o.rows.begin(), o.rows.end());
    result.provenance.insert(result.provenance.end(), o.provenance.begin(), o.provenance.end());
    result.hard_failures += o.failures;
  }
  const fs::path path = c.out / "zeros.csv";
  write_file(path, write_csv(zeros_table(rows)));
  result.outputs.push_back(path);
  return result;
}

CommandResult cmd_measures(const RunConfig& c) {
  const auto grid = grid_from_spec(c.grid);
  struct Out {
    std::vector<MeasureCsvRow> rows, mass_rows;
    std::vector<SummaryEntry> summary;
    std::vector<std::pair<std::string, std::string>> provenance;
    int failures = 0;
  };
  const auto per_weight = parallel_map(c.weights, c.jobs, [&](int k) {
    Out out;
    const auto w = build_weight(k, c);
    for (const auto& fail : w.failures) {
      out.provenance.push_back(fail);
      ++out.failures;
    }
    for (auto f : w.forms) {
      try {
        const auto zs = zeros_in_F(f);
        const auto report = zero_measure_report(zs, grid);
        for (auto& r : measure_rows(report)) out.rows.push_back(std::move(r));
        out.summary.push_back({f.id(), f.weight, f.kind, f.eigen_index, report.sup_diff, report.status});
        if (f.kind == FormKind::Eigenform) {
          f.petersson_norm = petersson_norm(f, c.eps);
          for (auto& r : measure_rows(mass_measure_report(f, grid, c.eps))) out.mass_rows.push_back(std::move(r));
        }
        out.provenance.emplace_back(f.id(), report.status);
      } catch (const std::exception& e) {
        const std::string status = status_of(e);
        out.rows.push_back({f.weight, f.kind, f.eigen_index, std::nullopt, status});
        out.summary.push_back({f.id(), f.weight, f.kind, f.eigen_index, std::nan(""), status});
        out.provenance.emplace_back(f.id(), status);
        ++out.failures;
        std::cerr << "modzero: " << f.id() << ": " << e.what() << "\n";
      }
    }
    return out;
  });
  CommandResult result;
  std::vector<MeasureCsvRow> rows, mass_rows;
  std::vector<SummaryEntry> summary;
  for (const auto& o : per_weight) {
    rows.insert(rows.end(), o.rows.begin(), o.rows.end());
    mass_rows.insert(mass_rows.end(), o.mass_rows.begin(), o.mass_rows.end());
    summary.insert(summary.end(), o.summary.begin(), o.summary.end());
    result.provenance.insert(result.provenance.end(), o.provenance.begin(), o.provenance.end());
    result.hard_failures += o.failures;
  }
  const fs::path measure = c.out / "measure.csv", mass = c.out / "mass.csv", sum = c.out / "summary.json";
  write_file(measure, write_csv(measure_table(rows)));
  write_file(mass, write_csv(measure_table(mass_rows)));
  write_file(sum, summary_json(summary));
  result.outputs = {measure, mass, sum};
  return result;
}

CommandResult cmd_gamma(const RunConfig& c) {
  const auto ks = gamma_weights(c);
  const auto reports = parallel_map(ks, c.jobs, [&](long k) { return gamma_row(gamma_report(k)); });
  CommandResult result;
  for (const auto& r : reports) result.provenance.emplace_back("k" + std::to_string(r.k), "ok");
  const fs::path path = c.out / "gamma.csv";
  write_file(path, write_csv(gamma_table(reports)));
  result.outputs.push_back(path);
  return result;
}

CommandResult cmd_potential(const RunConfig& c) {
  struct Out {
    std::vector<IdentityCheck> checks;
    std::vector<std::pair<std::string, std::string>> provenance;
    int failures = 0;
  };
  const auto per_weight = parallel_map(c.weights, c.jobs, [&](int k) {
    Out out;
    const auto w = build_weight(k, c);
    for (const auto& fail : w.failures) {
      out.provenance.push_back(fail);
      ++out.failures;
    }
    for (const auto& f : w.forms) {
      try {
        out.checks.push_back(check_zero_identity(f, zeros_in_F(f), c.bump, c.eps));
        out.provenance.emplace_back(f.id(), "ok");
      } catch (const std::exception& e) {
        out.provenance.emplace_back(f.id(), status_of(e));
        ++out.failures;
        std::cerr << "modzero: " << f.id() << ": " << e.what() << "\n";
      }
    }
    return out;
  });
  CommandResult result;
  std::vector<IdentityCheck> checks;
  for (const auto& o : per_weight) {
    checks.insert(checks.end(), o.checks.begin(), o.checks.end());
    result.provenance.insert(result.provenance.end(), o.provenance.begin(), o.provenance.end());
    result.hard_failures += o.failures;
  }
  const fs::path path = c.out / "identity.json";
  write_file(path, identity_json(checks));
  result.outputs.push_back(path);
  return result;
}

CommandResult cmd_supnorm(const RunConfig& c) {
  const auto per_weight = parallel_map(c.weights, c.jobs, [&](int k) {
    WeightForms w;
    w.k = k;
    try {
      if (dim_cusp(k) > 0) {
        const int n = c.truncation.value_or(
            std::max(default_form_truncation(k, FormKind::Eigenform, c.precision_bits), siegel_truncation(k)));
        w.forms = eigenforms(k, n, c.precision_bits);
        for (auto& f : w.forms) f.petersson_norm = petersson_norm(f, c.eps);
      }
    } catch (const std::exception& e) {
      w.forms.clear();
      w.failures.emplace_back("k" + std::to_string(k), status_of(e));
      std::cerr << "modzero: weight " << k << ": " << e.what() << "\n";
    }
    return w;
  });
  CommandResult result;
  std::vector<FormNumeric> forms;
  for (const auto& w : per_weight) {
    for (const auto& f : w.forms) {
      forms.push_back(f);
      result.provenance.emplace_back(f.id(), "ok");
    }
    for (const auto& fail : w.failures) {
      result.provenance.push_back(fail);
      ++result.hard_failures;
    }
  }
  const auto experiment = sup_mass_experiment(forms, default_sup_grid());
  const fs::path path = c.out / "supnorm.csv";
  write_file(path, write_csv(supnorm_table(supnorm_rows(experiment, forms))));
  result.outputs.push_back(path);
  json slope;
  slope["schema"] = kSchema;
  slope["slope"] = experiment.slope;
  slope["forms"] = forms.size();
  const fs::path slope_path = c.out / "supnorm_slope.json";
  write_file(slope_path, slope.dump(1) + "\n");
  result.outputs.push_back(slope_path);
  return result;
}

void write_manifest(const std::string& command, const RunConfig& c, const CommandResult& result) {
  json j;
  j["schema"] = kSchema;
  j["command"] = command;
  j["config"] = json::parse(config_json(c));
  j["config_hash"] = config_hash(c);
  json outputs = json::array();
  for (const auto& p : result.outputs) {
    json o;
    o["path"] = fs::relative(p, c.out).generic_string();
    const auto ext = p.extension().string();
    if (ext == ".csv") {
      std::ifstream in(p);
      std::string header;
      std::getline(in, header);
      o["columns"] = parse_csv(header).header;
    }
    outputs.push_back(o);
  }
  j["outputs"] = outputs;
  json rows = json::array();
  for (const auto& [id, status] : result.provenance) rows.push_back({{"id", id}, {"status", status}});
  j["rows"] = rows;
  j["hard_failures"] = result.hard_failures;
  write_file(c.out / ("manifest_" + command + ".json"), j.dump(1) + "\n");
}

int run(int argc, char** argv) {
  CLI::App app{"Zeros, masses and sup-norms of level-1 modular forms"};
  app.require_subcommand(1);

  RunConfig config;
  std::string kinds = "eisenstein,eigenform", bump = "0,1.5,0.3", out = "out";
  std::optional<int> truncation;

  auto add_common = [&](CLI::App* sub, std::string& weights, const std::string& default_weights) {
    sub->add_option("--weights", weights, "Weights, e.g. 12:200 or 12,24,36")
        ->envname("MODZ_WEIGHTS")
        ->default_val(default_weights);
    sub->add_option("--kinds", kinds, "eisenstein,eigenform")->envname("MODZ_KINDS")->capture_default_str();
    sub->add_option("--precision-bits", config.precision_bits)->envname("MODZ_PRECISION_BITS")->capture_default_str();
    sub->add_option("--truncation", truncation, "Override the number of q-expansion coefficients")
        ->envname("MODZ_TRUNCATION");
    sub->add_option("--eps", config.eps, "Quadrature tolerance")->envname("MODZ_EPS")->capture_default_str();
    sub->add_option("--grid", config.grid, "Measure grid, NXxNY")->envname("MODZ_GRID")->capture_default_str();
    sub->add_option("--jobs", config.jobs, "Worker threads")->envname("MODZ_JOBS")->capture_default_str();
    sub->add_option("--out", out, "Output directory")->envname("MODZ_OUT")->capture_default_str();
    sub->add_option("--bump", bump, "Test function x,y,r")->envname("MODZ_BUMP")->capture_default_str();
  };

  struct Command {
    const char* name;
    const char* help;
    const char* default_weights;
    CommandResult (*fn)(const RunConfig&);
  };
  const Command commands[] = {
      {"forms", "Write form JSON files", "12:24", cmd_forms},
      {"zeros", "Zeros in F as CSV", "12:24", cmd_zeros},
      {"measures", "Zero and mass measures on a grid", "12:24", cmd_measures},
      {"gamma", "Incomplete gamma asymptotics", "10,100,1000,10000", cmd_gamma},
      {"potential", "Zero-counting identity for a bump function", "12,24", cmd_potential},
      {"supnorm", "Sup-norm experiment over eigenforms", "60:72", cmd_supnorm},
  };
  std::vector<std::string> weights(std::size(commands));
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    auto* sub = app.add_subcommand(commands[i].name, commands[i].help);
    add_common(sub, weights[i], commands[i].default_weights);
    subs.emplace_back(sub, &commands[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    config.kinds = parse_kinds(kinds);
    config.bump = parse_bump(bump);
    config.truncation = truncation;
    config.out = out;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      const auto& [sub, cmd] = subs[i];
      if (!sub->parsed()) continue;
      config.weights = parse_weights(weights[i]);
      if (std::string(cmd->name) == "gamma") {
        for (int k : config.weights) {
          if (k < 1) throw InvalidArgument("gamma weights must be >= 1");
        }
      } else {
        config.validate();
      }
      const auto result = cmd->fn(config);
      write_manifest(cmd->name, config, result);
      for (const auto& p : result.outputs) std::cout << p.string() << "\n";
      if (result.hard_failures > 0) {
        std::cerr << "modzero: " << result.hard_failures << " failure(s), see manifest_" << cmd->name << ".json\n";
        return 1;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "modzero: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace modzero::cli
