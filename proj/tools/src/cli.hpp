#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "modzero/eigen.hpp"
#include "modzero/potential.hpp"

namespace modzero::cli {

struct RunConfig {
  std::vector<int> weights;
  std::vector<FormKind> kinds{FormKind::Eisenstein, FormKind::Eigenform};
  int precision_bits = kDefaultPrecisionBits;
  std::optional<int> truncation;
  double eps = 1e-8;
  std::filesystem::path out = "out";
  int jobs = 1;
  std::string grid = "6x6";
  BumpFunction bump{{0.0, 1.5}, 0.3};

  /// Throws InvalidArgument on weights not even >= 4, eps outside (0, 1e-2],
  /// jobs < 1 or precision below 64 bits.
  void validate() const;
};

/// "12:200" (step 2), "12:200:4", "12,16,20", or a mix such as "12,24:30".
std::vector<int> parse_weights(const std::string& text);
std::vector<FormKind> parse_kinds(const std::string& text);
/// "x,y,r".
BumpFunction parse_bump(const std::string& text);

/// Canonical JSON of the semantic fields (everything except out and jobs).
std::string config_json(const RunConfig& config);
/// FNV-1a of config_json.
std::string config_hash(const RunConfig& config);

/// Outcome of one command: files written, per-form provenance and failures.
struct CommandResult {
  std::vector<std::filesystem::path> outputs;
  /// (form id or k, status) in output order.
  std::vector<std::pair<std::string, std::string>> provenance;
  int hard_failures = 0;
};

/// Forms of the configured kinds for one weight, in (kind, index) order.
std::vector<FormNumeric> forms_for_weight(int k, const RunConfig& config);

CommandResult cmd_forms(const RunConfig& config);
CommandResult cmd_zeros(const RunConfig& config);
CommandResult cmd_measures(const RunConfig& config);
CommandResult cmd_gamma(const RunConfig& config);
CommandResult cmd_potential(const RunConfig& config);
CommandResult cmd_supnorm(const RunConfig& config);

/// Writes <out>/manifest_<command>.json.
void write_manifest(const std::string& command, const RunConfig& config, const CommandResult& result);

/// Entry point shared by the executable and the tests; returns the exit code.
int run(int argc, char** argv);

}  // namespace modzero::cli
