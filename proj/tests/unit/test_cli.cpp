#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "grpinv/io.hpp"
#include "oracles.hpp"

using namespace grpinv;

namespace {

const std::string kData = GRPINV_TEST_DATA;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(GRPINV_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  while (const auto n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Json json_of(const Run& r) { return Json::parse(r.out); }

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "grpinv_test_cli";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(CliGinv, ExampleMatrix) {
  const auto r = run("ginv " + kData + "/example_a.json");
  ASSERT_EQ(r.code, 0);
  const auto j = json_of(r);
  EXPECT_EQ(j["rank"], 2);
  EXPECT_MATRIX_NEAR(matrix_from_json(j["ginv"]),
                     ComplexMatrix::from_rows({{-0.75, 0.25}, {-0.25, -0.25}}), 1e-14);
  EXPECT_TRUE(j["tolerances"].contains("rank_factor"));
}

TEST(CliGinv, NotGroupInvertibleExitsTwo) {
  const auto r = run("ginv " + kData + "/nilpotent.json");
  ASSERT_EQ(r.code, 2);
  const auto j = json_of(r);
  EXPECT_EQ(j["error"], "NotGroupInvertible");
  EXPECT_EQ(j["rank"], 1);
  EXPECT_EQ(j["rank_square"], 0);
}

TEST(CliGinv, InputErrorsExitOne) {
  EXPECT_EQ(run("ginv " + kData + "/malformed.json").code, 1);
  EXPECT_EQ(run("ginv " + kData + "/missing.json").code, 1);
  const auto garbage = scratch() / "garbage.json";
  std::ofstream(garbage) << "[1, 2";
  EXPECT_EQ(run("ginv " + garbage.string()).code, 1);
  EXPECT_EQ(run("ginv").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(CliGinv, TextFormatAndOutFile) {
  const auto out = scratch() / "ginv.json";
  std::filesystem::remove(out);
  const auto r = run("ginv " + kData + "/example_a.json --format text --out " + out.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("group inverse"), std::string::npos);
  EXPECT_EQ(read_json_file(out)["rank"], 2);
}

TEST(CliVerify, ExitCodesFollowVerdicts) {
  EXPECT_EQ(run("verify " + kData + "/example26_instance.json").code, 0);
  const auto unsupported = run("verify " + kData + "/lambda_zero.json");
  EXPECT_EQ(unsupported.code, 5);
  EXPECT_EQ(json_of(unsupported)["verdict"], "Unsupported");
  EXPECT_EQ(run("verify " + kData + "/lambda_zero.json --include-unsupported").code, 4);
  EXPECT_EQ(run("verify " + kData + "/t21_lambda_two.json").code, 4);
  EXPECT_EQ(run("verify " + kData + "/t31_not_group_invertible.json").code, 4);
  EXPECT_EQ(run("verify " + kData + "/example_a.json").code, 1);
  EXPECT_EQ(run("verify").code, 1);
}

TEST(CliVerify, HypothesisFailExitsThree) {
  auto j = read_json_file(kData + "/example26_instance.json");
  j["lambda"] = Json::array({3.0, 0.0});
  const auto path = scratch() / "bad_lambda.json";
  write_json_file(path, j);
  EXPECT_EQ(run("verify " + path.string()).code, 3);
}

TEST(CliVerify, GeneratedInstance) {
  const auto r = run("verify --generate T2.4 --dims 2,3 --lambda 0.5 --seed 4");
  ASSERT_EQ(r.code, 0);
  const auto j = json_of(r);
  EXPECT_EQ(j["theorem"], "T2.4");
  EXPECT_EQ(j["provenance"]["generator"], "gen_T24");
  EXPECT_EQ(j["provenance"]["seed"], 4);
  EXPECT_EQ(run("verify --generate T3.5 --dims 3,1 --seed 2").code, 0);
  EXPECT_EQ(run("verify --generate T2.1 --dims 1,1,1,1 --lambda 1+i --seed 2").code, 4);
  EXPECT_EQ(run("verify --generate T9.9 --dims 2").code, 1);
}

TEST(CliGenerate, RoundTripsThroughVerify) {
  const auto path = scratch() / "generated.json";
  const auto r = run("generate T3.1 --dims 2 --lambda 2 --seed 8 --out " + path.string());
  ASSERT_EQ(r.code, 0);
  const auto j = read_json_file(path);
  EXPECT_EQ(j["theorem"], "T3.1");
  EXPECT_TRUE(j.contains("provenance"));
  EXPECT_EQ(json_of(r), j);
  const auto v = run("verify " + path.string());
  EXPECT_EQ(v.code, 0);
}

TEST(CliSuite, ExitCodesAndDeterminism) {
  const std::string base = "suite --theorems T2.4,T3.1 --count 3 --dims 2 --block-dims 2";
  const auto a = run(base + " --seed 5");
  ASSERT_EQ(a.code, 0);
  const auto b = run(base + " --seed 5 --jobs 2");
  EXPECT_EQ(json_of(a), json_of(b));
  EXPECT_EQ(json_of(a)["total"], 3 * 6 * 1 + 3 * 4 * 1);
  const auto bad = run("suite --theorems T2.1 --lambdas 2 --count 3 --dims 2");
  EXPECT_EQ(bad.code, 4);
  EXPECT_GT(json_of(bad)["counts"]["ConclusionFail"], 0);
  const auto reports = scratch() / "reports.json";
  EXPECT_EQ(run(base + " --reports " + reports.string()).code, 0);
  EXPECT_EQ(read_json_file(reports).size(), 30u);
}

TEST(CliFuzz, RediscoversLambdaZeroGap) {
  const auto dir = scratch() / "findings";
  std::filesystem::remove_all(dir);
  const auto r = run(
      "fuzz --theorem T2.1 --include-unsupported --lambda 0 --domain binary --dim 2 "
      "--exhaustive --max-findings 2 --out-dir " + dir.string());
  ASSERT_EQ(r.code, 4);
  const auto j = json_of(r);
  EXPECT_GT(j["total_findings"], 0);
  ASSERT_EQ(j["findings"].size(), 2u);
  const auto replay = run("verify --include-unsupported " + (dir / "finding_0.json").string());
  EXPECT_EQ(replay.code, 4);
  EXPECT_EQ(run("fuzz --theorem T2.4 --trials 200 --seed 1").code, 0);
}

TEST(CliExample26, Passes) {
  const auto r = run("example26");
  ASSERT_EQ(r.code, 0);
  const auto j = json_of(r);
  EXPECT_EQ(j["verdict"], "Pass");
  EXPECT_EQ(j["branch"], "Generic");
  EXPECT_MATRIX_NEAR(matrix_from_json(j["intermediates"]["(A+B)#"]),
                     ComplexMatrix::from_rows({{-1.0, 0.0}, {-0.5, -0.5}}), 1e-12);
}
