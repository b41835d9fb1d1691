#include "usat/cli.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include "test_support.hpp"
#include "usat/docio.hpp"

namespace usat {
namespace {

namespace fs = std::filesystem;
using testing::fixture_path;
using testing::read_file;
using testing::run_cli_capture;

const std::string kLinear =
    "builtin:linear:phase_error:0,PAR-LAT=2,PAR-STEP=1,PAR-SCALE=0.1,PAR-FILT=0.0001;"
    "power_error:0.5,PAR-LAT=1,PAR-SCALE=0.5";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = testing::make_temp_dir("cli"); }
  void TearDown() override { fs::remove_all(dir_); }
  std::string copy(const std::string& fixture) {
    const auto to = dir_ / fs::path(fixture).filename();
    fs::copy_file(fixture_path(fixture), to, fs::copy_options::overwrite_existing);
    return to.string();
  }
  fs::path dir_;
};

TEST_F(CliTest, Usage) {
  EXPECT_EQ(run_cli_capture({}).code, kExitUsage);
  EXPECT_EQ(run_cli_capture({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run_cli_capture({"validate"}).code, kExitUsage);
  EXPECT_EQ(run_cli_capture({"delay", "x.csv", "--bins", "0"}).code, kExitUsage);
  const auto help = run_cli_capture({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("screen"), std::string::npos);
}

TEST_F(CliTest, ValidateFixtures) {
  const auto r = run_cli_capture({"validate", fixture_path("menb.htd.yaml")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("0 errors"), std::string::npos);
}

TEST_F(CliTest, ValidateNegativeFixtures) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"dup_id", "E_DUP_ID /sbd/nodes/1/id"},
      {"dangling_component", "E_DANGLING_COMPONENT /parameters/0/component_ref"},
      {"dangling_poi", "E_DANGLING_POI /parameters/0/poi_assignments/1"},
      {"bidir_factor", "E_BIDIR_FACTOR /parameters/0/poi_assignments/0"},
      {"range_order", "E_RANGE_ORDER /parameters/0/nominal"},
      {"framing_repr", "E_FRAMING_REPR /parameters/0/representation"},
  };
  for (const auto& [name, line] : cases) {
    const auto r = run_cli_capture({"validate", fixture_path("invalid/" + name + ".htd.yaml")});
    EXPECT_EQ(r.code, kExitFindings) << name;
    EXPECT_NE(r.out.find(line + ":"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("1 errors, 0 warnings"), std::string::npos) << r.out;
  }
  const auto w = run_cli_capture({"validate", fixture_path("invalid/unassigned_param.htd.yaml")});
  EXPECT_EQ(w.code, kExitOk);
  EXPECT_NE(w.out.find("W_UNASSIGNED_PARAM"), std::string::npos);
}

TEST_F(CliTest, ValidateIoAndParseErrors) {
  EXPECT_EQ(run_cli_capture({"validate", (dir_ / "missing.yaml").string()}).code, kExitIo);
  testing::write_file(dir_ / "bad.yaml", "id: [\n");
  const auto r = run_cli_capture({"validate", (dir_ / "bad.yaml").string()});
  EXPECT_EQ(r.code, kExitFindings);
  EXPECT_NE(r.err.find("syntax error"), std::string::npos);
}

TEST_F(CliTest, InitRefusesOverwrite) {
  const auto path = (dir_ / "new.yaml").string();
  EXPECT_EQ(run_cli_capture({"init", path}).code, kExitOk);
  EXPECT_EQ(load_document(path), skeleton_document());
  testing::write_file(path, "edited");
  EXPECT_EQ(run_cli_capture({"init", path}).code, kExitIo);
  EXPECT_EQ(read_file(path), "edited");
  EXPECT_EQ(run_cli_capture({"init", path, "--force"}).code, kExitOk);
  EXPECT_EQ(run_cli_capture({"validate", path}).code, kExitOk);
}

TEST_F(CliTest, SbdAndFactors) {
  auto r = run_cli_capture({"sbd", fixture_path("gdrts.htd.yaml"), "--dot", "-"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, read_file(testing::golden_path("gdrts_sbd.dot")));
  r = run_cli_capture({"sbd", fixture_path("menb.htd.yaml")});
  EXPECT_NE(r.out.find("leaves without parameters: EL-LINE TH-PIPE TH-CONS CTRL-COM\n"), std::string::npos) << r.out;
  r = run_cli_capture({"factors", fixture_path("menb.htd.yaml"), "--poi", "POI-2"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("5 factors assigned to POI-2"), std::string::npos);
  EXPECT_EQ(run_cli_capture({"factors", fixture_path("menb.htd.yaml"), "--poi", "POI-9"}).code, kExitUsage);
}

TEST_F(CliTest, ScreenDryRunIsDeterministicAndLeavesFileAlone) {
  const auto doc = copy("gdrts.htd.yaml");
  const auto before = read_file(doc);
  const std::vector<std::string> args = {"screen", doc, "--poi", "POI-1", "--runner", kLinear, "--seed", "7"};
  const auto a = run_cli_capture(args);
  const auto b = run_cli_capture(args);
  EXPECT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(read_file(doc), before);
  EXPECT_NE(a.out.find("| 1 | PAR-LAT | communication latency |"), std::string::npos) << a.out;
  EXPECT_NE(a.out.find("seed 7"), std::string::npos);
}

TEST_F(CliTest, ScreenWriteTouchesOnlyTheRanking) {
  const auto doc = copy("gdrts.htd.yaml");
  const auto original = load_document(doc);
  const auto r = run_cli_capture({"screen", doc, "--poi", "POI-1", "--runner", kLinear, "--metric", "power_error",
                                  "--write"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto updated = load_document(doc);
  ASSERT_TRUE(updated.poi_cases[0].ranking.has_value());
  EXPECT_EQ(updated.poi_cases[0].ranking->metric, "power_error");
  EXPECT_EQ(updated.poi_cases[0].ranking->entries[0].param_id, "PAR-LAT");
  updated.poi_cases[0].ranking.reset();
  EXPECT_EQ(updated, original);
  // Writing again yields the same bytes.
  const auto once = read_file(doc);
  run_cli_capture({"screen", doc, "--poi", "POI-1", "--runner", kLinear, "--metric", "power_error", "--write"});
  EXPECT_EQ(read_file(doc), once);
}

TEST_F(CliTest, ScreenWithSubprocessRunner) {
  const auto doc = copy("gdrts.htd.yaml");
  const std::string runner = std::string(USAT_AFFINE_RUNNER) +
                             " --metric phase_error=0,PAR-LAT=2,PAR-STEP=1,PAR-SCALE=0.1,PAR-FILT=0.0001"
                             " --metric power_error=0.5,PAR-LAT=1,PAR-SCALE=0.5 --sleep-ms 20";
  const auto serial = run_cli_capture({"screen", doc, "--poi", "POI-1", "--runner", runner});
  const auto parallel = run_cli_capture({"screen", doc, "--poi", "POI-1", "--runner", runner, "--jobs", "4"});
  const auto builtin = run_cli_capture({"screen", doc, "--poi", "POI-1", "--runner", kLinear});
  EXPECT_EQ(serial.code, kExitOk) << serial.err;
  EXPECT_EQ(serial.out, parallel.out);
  // Same model in-process: same effects, same table.
  EXPECT_EQ(serial.out.substr(serial.out.find("runs:")), builtin.out.substr(builtin.out.find("runs:")));
}

TEST_F(CliTest, ScreenFailures) {
  const auto doc = copy("gdrts.htd.yaml");
  const std::string runner = std::string(USAT_AFFINE_RUNNER) + " --metric phase_error=0 --metric power_error=0";
  auto r = run_cli_capture({"screen", doc, "--poi", "POI-1", "--runner", runner + " --fail-run 0"});
  EXPECT_EQ(r.code, kExitRunner);
  r = run_cli_capture({"screen", doc, "--poi", "POI-1", "--runner", runner + " --fail-run 2"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("run 2 failed"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("skipped factors: PAR-STEP"), std::string::npos) << r.out;
  r = run_cli_capture({"screen", fixture_path("invalid/bidir_factor.htd.yaml"), "--poi", "POI-1", "--runner", kLinear});
  EXPECT_EQ(r.code, kExitFindings);
  r = run_cli_capture({"screen", doc, "--poi", "POI-1", "--runner", kLinear, "--rule", "sideways"});
  EXPECT_EQ(r.code, kExitUsage);
  r = run_cli_capture({"screen", doc, "--poi", "POI-1", "--runner", kLinear, "--metric", "nope"});
  EXPECT_EQ(r.code, kExitUsage);
}

TEST_F(CliTest, DelaySummary) {
  auto r = run_cli_capture({"delay", fixture_path("gdrts_delay.csv"), "--bins", "100"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("mode: bin 41 [12.5982, 12.6084] ms, count 6460, rho 6.46 %\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("first: bin 0 [12.18, "), std::string::npos);
  EXPECT_NE(r.out.find("count 1, rho 0.001 %"), std::string::npos);
  EXPECT_NE(r.out.find("count 3, rho 0.003 %"), std::string::npos);
  r = run_cli_capture({"delay", fixture_path("gdrts_delay.csv"), "--bins", "100", "--report"});
  EXPECT_EQ(r.out.rfind("## Delay Characterization", 0), 0u);
  testing::write_file(dir_ / "empty.csv", "delay_ms\n");
  EXPECT_EQ(run_cli_capture({"delay", (dir_ / "empty.csv").string(), "--bins", "10"}).code, kExitIo);
}

TEST_F(CliTest, ReportToFileAndStdout) {
  const auto out = (dir_ / "report.md").string();
  auto r = run_cli_capture({"report", fixture_path("gdrts.htd.yaml"), "--delay", fixture_path("gdrts_delay.csv"),
                            "-o", out});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto text = read_file(out);
  EXPECT_NE(text.find("rho = 6.46 %"), std::string::npos);
  r = run_cli_capture({"report", fixture_path("gdrts.htd.yaml"), "--delay", fixture_path("gdrts_delay.csv"),
                       "-o", "-"});
  EXPECT_EQ(r.out, text);
}

TEST(CliBinary, ExitStatusReachesShell) {
  const std::string cmd = std::string(USAT_CLI) + " validate " + fixture_path("invalid/dangling_poi.htd.yaml") +
                          " > /dev/null";
  const int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), kExitFindings);
}

}  // namespace
}  // namespace usat
