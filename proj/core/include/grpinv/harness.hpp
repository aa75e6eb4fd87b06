#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "grpinv/io.hpp"

namespace grpinv {

enum class Verdict { Pass, HypothesisFail, ConclusionFail, Unsupported };

std::string_view to_string(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view s);

struct Residual {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool ok() const noexcept { return value <= tolerance; }
};

struct VerificationReport {
  std::string instance_id;
  std::string theorem;
  Complex lambda{0.0, 0.0};
  Index dimension = 0;
  std::vector<Residual> hypothesis;
  std::vector<Residual> conclusion;
  Verdict verdict = Verdict::Unsupported;
  std::string message;
  double seconds = 0.0;
  std::optional<Provenance> provenance;
  // Formula candidate for (a + b)^#, or M^# for block statements.
  std::optional<ComplexMatrix> candidate;
  std::map<std::string, double> tolerances;
};

struct HarnessOptions {
  Tolerance tol;
  // Corollary output vs mirrored parent output, entrywise.
  double duality_tol = 1e-10;
  bool check_duality = true;
  // Evaluate lambda values outside a statement's proven range instead of
  // reporting Unsupported.
  bool include_unsupported = false;
};

VerificationReport verify(const Instance& inst, const HarnessOptions& opts = {},
                          std::string instance_id = {},
                          std::optional<Provenance> provenance = std::nullopt);

Json report_to_json(const VerificationReport& r, bool include_timing = true);
VerificationReport report_from_json(const Json& j);

// Provenance-driven regeneration of an instance.
Instance regenerate(const Provenance& p);

// Supported lambda set of each statement and the default suite grids.
std::vector<std::string> all_theorem_tags();
std::vector<Complex> default_lambda_grid(const std::string& theorem);

struct SuiteConfig {
  std::vector<std::string> theorems;  // empty: every statement
  int count = 100;
  std::uint64_t seed = 20240611;
  std::vector<Index> dims{2, 4, 8, 16};       // additive operand size n
  std::vector<Index> block_dims{1, 2, 4, 8};  // block size n (M is 2n x 2n)
  std::vector<Complex> lambdas;               // empty: per-statement grid
  double cond_bound = 10.0;
  HarnessOptions options;
  unsigned jobs = 1;
};

struct TheoremCoverage {
  std::set<std::pair<double, double>> lambdas;
  std::set<std::vector<Index>> dims;
  std::map<Verdict, int> counts;
  std::map<std::string, double> worst;  // per residual name
};

struct FailureRecord {
  std::string instance_id;
  std::string theorem;
  Verdict verdict = Verdict::ConclusionFail;
  std::optional<Provenance> provenance;
};

struct SuiteSummary {
  std::uint64_t seed = 0;
  int total = 0;
  std::map<Verdict, int> counts;
  std::map<std::string, TheoremCoverage> theorems;
  std::vector<FailureRecord> failures;
  std::map<std::string, double> tolerances;
};

// Runs count instances per (statement, lambda, dims) cell. Instance i of a
// cell draws its seed from (master seed, statement, lambda, dims, i), so the
// summary is independent of `jobs`.
SuiteSummary run_suite(const SuiteConfig& cfg,
                       std::vector<VerificationReport>* reports = nullptr);

void accumulate(SuiteSummary& summary, const VerificationReport& r);
Json summary_to_json(const SuiteSummary& s);

enum class FuzzDomain { Generated, Binary, Ternary };
std::string_view to_string(FuzzDomain d);
std::optional<FuzzDomain> parse_fuzz_domain(std::string_view s);

struct FuzzConfig {
  std::string theorem = "T2.1";
  int trials = 1000;
  std::uint64_t seed = 1;
  // Generated domain: relative size of the noise added to each operand.
  double perturbation = 0.0;
  bool include_unsupported = false;
  std::optional<Complex> lambda;
  FuzzDomain domain = FuzzDomain::Generated;
  Index dim = 4;  // upper bound on n (exact n for exhaustive runs)
  // Enumerate every matrix tuple over the Binary/Ternary alphabet.
  bool exhaustive = false;
  std::size_t max_findings = 20;
  double cond_bound = 10.0;
  HarnessOptions options;
};

struct FuzzFinding {
  Instance original;
  Instance shrunk;
  VerificationReport report;  // report for the shrunk instance
};

struct FuzzResult {
  SuiteSummary summary;
  std::vector<FuzzFinding> findings;  // at most max_findings, shrunk
  std::size_t total_findings = 0;
};

FuzzResult run_fuzz(const FuzzConfig& cfg);

// Deletes matched row/column pairs, then snaps entries to
// {0, ±1, ±1/2, ±2}, keeping each step only while `still_fails` holds.
Instance shrink(const Instance& inst,
                const std::function<bool(const Instance&)>& still_fails);

struct Example26Result {
  VerificationReport report;
  std::vector<std::pair<std::string, ComplexMatrix>> intermediates;
};

// The worked T2.4 example with A = [[-1,-1],[1,-3]], B = [[0,1],[0,1]],
// lambda = -2, checked against its published (A+B)^# to 1e-12.
Example26Result run_example26(const HarnessOptions& opts = {});

}  // namespace grpinv
