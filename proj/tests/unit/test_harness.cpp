#include <gtest/gtest.h>

#include <algorithm>

#include "grpinv/error.hpp"
#include "grpinv/harness.hpp"
#include "grpinv/random.hpp"
#include "oracles.hpp"

using namespace grpinv;

namespace {

const auto kLambdaZeroA = ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 1.0}});
const auto kE11 = ComplexMatrix::diagonal({1.0, 0.0});

GeneratorConfig config(std::vector<Index> dims, Complex lambda, std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.dims = std::move(dims);
  cfg.lambda = lambda;
  cfg.seed = seed;
  return cfg;
}

const Residual* find(const std::vector<Residual>& rs, const std::string& name) {
  const auto it = std::find_if(rs.begin(), rs.end(), [&](const Residual& r) {
    return r.name == name;
  });
  return it == rs.end() ? nullptr : &*it;
}

}  // namespace

TEST(Example26, Passes) {
  const auto out = run_example26();
  EXPECT_EQ(out.report.verdict, Verdict::Pass) << out.report.message;
  ASSERT_TRUE(out.report.candidate);
  EXPECT_MATRIX_NEAR(*out.report.candidate,
                     ComplexMatrix::from_rows({{-1.0, 0.0}, {-0.5, -0.5}}), 1e-12);
  const auto* ab = find(out.report.conclusion, "A*B + 2*B");
  ASSERT_NE(ab, nullptr);
  EXPECT_EQ(ab->value, 0.0);
  EXPECT_EQ(out.intermediates.size(), 6u);
  EXPECT_EQ(out.intermediates.front().first, "A#");
}

TEST(Verify, LambdaZeroIsUnsupportedUnlessForced) {
  const AdditiveScenario s{AdditiveTheorem::T2_1, 0.0, kLambdaZeroA, kE11};
  const auto rep = verify(s);
  EXPECT_EQ(rep.verdict, Verdict::Unsupported);
  HarnessOptions opts;
  opts.include_unsupported = true;
  const auto forced = verify(s, opts);
  EXPECT_EQ(forced.verdict, Verdict::ConclusionFail);
  for (const auto& h : forced.hypothesis) EXPECT_EQ(h.value, 0.0) << h.name;
  const auto* axa = find(forced.conclusion, "a+b: a*x*a - a");
  ASSERT_NE(axa, nullptr);
  EXPECT_GE(axa->value, 0.1);
}

TEST(Verify, GenericT21BranchFailsAtLambdaTwo) {
  const AdditiveScenario s{AdditiveTheorem::T2_1, 2.0,
                           ComplexMatrix::from_rows({{2.0, 1.0}, {0.0, 1.0}}), kE11};
  const auto rep = verify(s);
  EXPECT_EQ(rep.verdict, Verdict::ConclusionFail);
  const auto* f = find(rep.conclusion, "formula vs group_inverse(a+b)");
  ASSERT_NE(f, nullptr);
  EXPECT_GT(f->value, 0.1);
}

TEST(Verify, HypothesisFailures) {
  const auto nil = ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
  EXPECT_EQ(verify(AdditiveScenario{AdditiveTheorem::T2_4, 1.0, nil, kE11}).verdict,
            Verdict::HypothesisFail);
  auto s = gen_T24(config({2, 2}, 0.5, 1)).instance;
  s.lambda = 0.7;
  EXPECT_EQ(verify(s).verdict, Verdict::HypothesisFail);
  EXPECT_THROW(verify(AdditiveScenario{AdditiveTheorem::T2_4, 1.0, ComplexMatrix::identity(2),
                                       ComplexMatrix::identity(3)}),
               Error);
}

TEST(Verify, GeneratedStatements) {
  EXPECT_EQ(verify(gen_T24(config({2, 3}, 0.5, 2)).instance).verdict, Verdict::Pass);
  EXPECT_EQ(verify(gen_T31(config({3}, 2.0, 2)).instance).verdict, Verdict::Pass);
  const auto t35 = verify(gen_T35(config({3, 2}, 1.0, 2)).instance);
  EXPECT_EQ(t35.verdict, Verdict::Pass) << t35.message;
  EXPECT_NE(find(t35.conclusion, "rank(K^2) - rank(CB) - rank(BC)"), nullptr);
  const auto t33 = verify(gen_T33(config({3}, 2.0, 2)).instance);
  EXPECT_EQ(t33.verdict, Verdict::ConclusionFail);
  const auto* rank = find(t33.conclusion, "rank(M) - rank(M^2)");
  ASSERT_NE(rank, nullptr);
  EXPECT_EQ(rank->value, 0.0);
}

TEST(Verify, BlockMinusOneIsUnsupported) {
  auto s = gen_T31(config({2}, 2.0, 3)).instance;
  s.lambda = -1.0;
  const auto rep = verify(s);
  EXPECT_EQ(rep.verdict, Verdict::Unsupported);
  EXPECT_NE(rep.message.find("inherited restriction"), std::string::npos);
}

TEST(Report, JsonRoundTrip) {
  const Provenance p{"gen_T24", 5, config({2, 2}, 0.5, 5)};
  const auto rep = verify(regenerate(p), {}, "T2.4/x/1", p);
  const auto j = report_to_json(rep);
  for (const char* key : {"id", "theorem", "lambda", "dimension", "verdict", "message",
                          "hypothesis", "conclusion", "tolerances", "seconds", "provenance",
                          "candidate"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_FALSE(report_to_json(rep, false).contains("seconds"));
  const auto back = report_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.verdict, rep.verdict);
  EXPECT_EQ(back.instance_id, "T2.4/x/1");
  EXPECT_EQ(back.conclusion.size(), rep.conclusion.size());
  EXPECT_EQ(back.tolerances, rep.tolerances);
  EXPECT_EQ(report_to_json(back), j);
  EXPECT_THROW(report_from_json(Json::parse(R"({"id":"x"})")), Error);
}

TEST(Report, RegenerateMatchesGenerator) {
  const auto cfg = config({1, 1, 1, 1}, 2.0, 31);
  const auto inst = std::get<AdditiveScenario>(regenerate({"gen_T21", 31, cfg}));
  EXPECT_MATRIX_NEAR(inst.a, gen_T21(cfg).instance.a, 0.0);
  const auto blk = std::get<BlockScenario>(regenerate({"gen_C36", 4, config({3, 1}, 1.0, 4)}));
  EXPECT_EQ(blk.theorem, BlockTheorem::C3_6);
}

TEST(Suite, MinusOneForT24IsAllUnsupported) {
  SuiteConfig cfg;
  cfg.theorems = {"T2.4"};
  cfg.lambdas = {-1.0};
  cfg.count = 5;
  cfg.dims = {2, 4};
  const auto s = run_suite(cfg);
  EXPECT_EQ(s.total, 10);
  EXPECT_EQ(s.counts.at(Verdict::Unsupported), 10);
}

TEST(Suite, SummaryIndependentOfJobs) {
  SuiteConfig cfg;
  cfg.theorems = {"T2.1", "T2.4", "T3.5", "C3.2"};
  cfg.count = 4;
  cfg.dims = {2, 4};
  cfg.block_dims = {1, 2};
  cfg.seed = 17;
  std::vector<VerificationReport> r1, r2;
  const auto one = summary_to_json(run_suite(cfg, &r1));
  cfg.jobs = 3;
  const auto three = summary_to_json(run_suite(cfg, &r2));
  EXPECT_EQ(one, three);
  ASSERT_EQ(r1.size(), r2.size());
  for (std::size_t i = 0; i < r1.size(); ++i) {
    EXPECT_EQ(report_to_json(r1[i], false), report_to_json(r2[i], false));
  }
  cfg.seed = 18;
  EXPECT_NE(summary_to_json(run_suite(cfg)), one);
}

TEST(Suite, FailuresReplayFromProvenance) {
  SuiteConfig cfg;
  cfg.theorems = {"T2.1"};
  cfg.lambdas = {2.0};
  cfg.count = 10;
  cfg.dims = {4};
  const auto s = run_suite(cfg);
  ASSERT_FALSE(s.failures.empty());
  const auto& f = s.failures.front();
  ASSERT_TRUE(f.provenance);
  EXPECT_EQ(verify(regenerate(*f.provenance)).verdict, f.verdict);
  const auto j = summary_to_json(s);
  EXPECT_EQ(j["total"], 10);
  EXPECT_TRUE(j["theorems"]["T2.1"]["worst"].contains("formula vs group_inverse(a+b)"));
  SuiteConfig unknown;
  unknown.theorems = {"T9.9"};
  EXPECT_THROW(run_suite(unknown), Error);
}

TEST(Fuzz, ExhaustiveBinarySearchRediscoversLambdaZeroGap) {
  FuzzConfig cfg;
  cfg.theorem = "T2.1";
  cfg.include_unsupported = true;
  cfg.lambda = Complex(0.0);
  cfg.domain = FuzzDomain::Binary;
  cfg.dim = 2;
  cfg.exhaustive = true;
  const auto r = run_fuzz(cfg);
  EXPECT_EQ(r.summary.total, 256);
  ASSERT_GT(r.total_findings, 0u);
  bool seen = false;
  for (const auto& f : r.findings) {
    EXPECT_EQ(f.report.verdict, Verdict::ConclusionFail);
    const auto& s = std::get<AdditiveScenario>(f.original);
    if (oracle::max_diff(s.a, kLambdaZeroA) == 0.0 && oracle::max_diff(s.b, kE11) == 0.0) {
      seen = true;
    }
  }
  EXPECT_TRUE(seen);
  cfg.include_unsupported = false;
  cfg.lambda.reset();
  EXPECT_EQ(run_fuzz(cfg).total_findings, 0u);
}

TEST(Fuzz, T24HasNoFindings) {
  FuzzConfig cfg;
  cfg.theorem = "T2.4";
  cfg.trials = 10000;
  cfg.seed = 3;
  const auto r = run_fuzz(cfg);
  EXPECT_EQ(r.summary.total, 10000);
  EXPECT_EQ(r.total_findings, 0u);
  EXPECT_EQ(r.summary.counts.at(Verdict::Pass), 10000);
}

TEST(Fuzz, RejectsOversizedExhaustiveSpace) {
  FuzzConfig cfg;
  cfg.theorem = "T3.1";
  cfg.domain = FuzzDomain::Ternary;
  cfg.dim = 3;
  cfg.exhaustive = true;
  EXPECT_THROW(run_fuzz(cfg), Error);
  cfg.theorem = "T0.0";
  EXPECT_THROW(run_fuzz(cfg), Error);
}

TEST(Shrink, DeletesAndSnaps) {
  // Failure predicate: entry (0, 0) of a exceeds 0.9 in magnitude. Deleting
  // index 0 leaves 2.1 in that slot, which then snaps to 2.
  const auto a = ComplexMatrix::from_rows({{1.3, 0.2, 0.7}, {0.4, 2.1, 0.0}, {0.1, 0.0, 0.6}});
  const AdditiveScenario s{AdditiveTheorem::T2_1, 1.0, a, random_general(3, 3, 1)};
  const auto small = shrink(s, [](const Instance& inst) {
    return std::abs(std::get<AdditiveScenario>(inst).a(0, 0)) > 0.9;
  });
  const auto& out = std::get<AdditiveScenario>(small);
  EXPECT_EQ(out.a.rows(), 1);
  EXPECT_EQ(out.a(0, 0), Complex(2.0, 0.0));
  EXPECT_EQ(out.b.rows(), 1);
}
