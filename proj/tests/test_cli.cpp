#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli.hpp"
#include "modzero/errors.hpp"
#include "modzero/io.hpp"

using namespace modzero;
using namespace modzero::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "modzero");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("modzero_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(ParseWeights, RangesListsAndErrors) {
  EXPECT_EQ(parse_weights("12:18"), (std::vector<int>{12, 14, 16, 18}));
  EXPECT_EQ(parse_weights("12:24:6"), (std::vector<int>{12, 18, 24}));
  EXPECT_EQ(parse_weights("30,12,16:18,12"), (std::vector<int>{12, 16, 18, 30}));
  EXPECT_THROW(parse_weights("18:12"), InvalidArgument);
  EXPECT_THROW(parse_weights("12:20:0"), InvalidArgument);
  EXPECT_THROW(parse_weights("1:2:3:4"), InvalidArgument);
  EXPECT_THROW(parse_weights("twelve"), InvalidArgument);
}

TEST(ParseKinds, KnownKindsOnly) {
  EXPECT_EQ(parse_kinds("eigenform,eisenstein,eigenform"), (std::vector<FormKind>{FormKind::Eisenstein, FormKind::Eigenform}));
  EXPECT_THROW(parse_kinds("custom"), InvalidArgument);
  EXPECT_THROW(parse_kinds("newform"), InvalidArgument);
}

TEST(ParseBump, ThreeNumbers) {
  const auto phi = parse_bump("0.1,1.5,0.25");
  EXPECT_EQ(phi.center.x, 0.1);
  EXPECT_EQ(phi.radius, 0.25);
  EXPECT_THROW(parse_bump("0,1"), InvalidArgument);
  EXPECT_THROW(parse_bump("0,0.2,0.3"), InvalidArgument);
}

TEST(RunConfig, Validation) {
  RunConfig c;
  c.weights = {12};
  EXPECT_NO_THROW(c.validate());
  c.weights = {13};
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.weights = {12};
  c.eps = 0.5;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.eps = 1e-8;
  c.jobs = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.jobs = 1;
  c.grid = "6by6";
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(ConfigHash, SemanticFieldsOnly) {
  RunConfig a;
  a.weights = {12, 14};
  RunConfig b = a;
  b.out = "elsewhere";
  b.jobs = 4;
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.eps = 1e-9;
  EXPECT_NE(config_hash(a), config_hash(b));
  b = a;
  b.weights = {12, 16};
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a), fnv1a_hex(config_json(a)));
}

TEST(ForAllWeights, FormsForWeightRespectsKinds) {
  RunConfig c;
  c.kinds = {FormKind::Eigenform};
  EXPECT_EQ(forms_for_weight(24, c).size(), 2u);
  EXPECT_TRUE(forms_for_weight(14, c).empty());
  c.kinds = {FormKind::Eisenstein, FormKind::Eigenform};
  const auto all = forms_for_weight(24, c);
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[0].kind, FormKind::Eisenstein);
}

TEST(Commands, ZerosAreDeterministicAcrossJobCounts) {
  const auto one = fresh_dir("jobs1"), two = fresh_dir("jobs3");
  ASSERT_EQ(run_args({"zeros", "--weights", "12:40", "--jobs", "1", "--out", one.string()}), 0);
  ASSERT_EQ(run_args({"zeros", "--weights", "12:40", "--jobs", "3", "--out", two.string()}), 0);
  EXPECT_EQ(slurp(one / "zeros.csv"), slurp(two / "zeros.csv"));
  const auto m1 = nlohmann::json::parse(slurp(one / "manifest_zeros.json"));
  const auto m2 = nlohmann::json::parse(slurp(two / "manifest_zeros.json"));
  EXPECT_EQ(m1["config_hash"], m2["config_hash"]);
  EXPECT_EQ(m1["schema"], "modzero/1");
  EXPECT_EQ(m1["outputs"][0]["columns"], nlohmann::json(zeros_csv_columns()));
  EXPECT_EQ(m1["hard_failures"], 0);
  const auto rows = parse_zeros_table(parse_csv(slurp(one / "zeros.csv")));
  EXPECT_FALSE(rows.empty());
}

TEST(Commands, MeasuresWriteSchemaValidOutputs) {
  const auto dir = fresh_dir("measures");
  ASSERT_EQ(run_args({"measures", "--weights", "24", "--grid", "3x3", "--out", dir.string()}), 0);
  const auto rows = parse_measure_table(parse_csv(slurp(dir / "measure.csv")));
  EXPECT_EQ(rows.size(), 3u * 10u);
  const auto mass = parse_measure_table(parse_csv(slurp(dir / "mass.csv")));
  EXPECT_EQ(mass.size(), 2u * 10u);
  const auto summary = parse_summary_json(slurp(dir / "summary.json"));
  ASSERT_EQ(summary.size(), 3u);
  EXPECT_EQ(summary[0].id, "k24_eisenstein");
}

TEST(Commands, GammaPotentialSupnormAndForms) {
  const auto dir = fresh_dir("misc");
  ASSERT_EQ(run_args({"gamma", "--weights", "10,100", "--out", dir.string()}), 0);
  const auto g = parse_gamma_table(parse_csv(slurp(dir / "gamma.csv")));
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[1].k, 100);

  ASSERT_EQ(run_args({"potential", "--weights", "12", "--kinds", "eigenform", "--out", dir.string()}), 0);
  const auto checks = parse_identity_json(slurp(dir / "identity.json"));
  ASSERT_EQ(checks.size(), 1u);
  EXPECT_EQ(checks[0].lhs, 0.0);

  ASSERT_EQ(run_args({"supnorm", "--weights", "24,26", "--out", dir.string()}), 0);
  EXPECT_EQ(parse_supnorm_table(parse_csv(slurp(dir / "supnorm.csv"))).size(), 3u);

  ASSERT_EQ(run_args({"forms", "--weights", "12", "--truncation", "30", "--out", dir.string()}), 0);
  const auto f = form_from_json(slurp(dir / "forms" / "k12_eigenform0.json"));
  EXPECT_EQ(f.trunc(), 30);
  EXPECT_TRUE(fs::exists(dir / "forms" / "k12_eisenstein.json"));
}

TEST(Commands, BadArgumentsGiveNonzeroExit) {
  const auto dir = fresh_dir("bad");
  EXPECT_EQ(run_args({"zeros", "--weights", "13", "--out", dir.string()}), 2);
  EXPECT_NE(run_args({"zeros", "--eps", "abc", "--out", dir.string()}), 0);
  EXPECT_NE(run_args({"nonsense"}), 0);
  EXPECT_NE(run_args({}), 0);
}

TEST(Commands, EnvironmentOverridesDefaults) {
  const auto dir = fresh_dir("env");
  setenv("MODZ_WEIGHTS", "16", 1);
  const int rc = run_args({"zeros", "--out", dir.string()});
  unsetenv("MODZ_WEIGHTS");
  ASSERT_EQ(rc, 0);
  const auto rows = parse_zeros_table(parse_csv(slurp(dir / "zeros.csv")));
  ASSERT_FALSE(rows.empty());
  for (const auto& r : rows) EXPECT_EQ(r.k, 16);
}
