#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "grpinv/error.hpp"
#include "grpinv/harness.hpp"
#include "grpinv/io.hpp"

namespace {

using namespace grpinv;

enum Exit : int {
  kOk = 0,
  kIoError = 1,
  kNotGroupInvertible = 2,
  kHypothesisFail = 3,
  kConclusionFail = 4,
  kUnsupported = 5,
};

struct Common {
  std::optional<double> tol_rank;
  std::optional<double> tol_resid;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
};

Tolerance make_tolerance(const Common& c) {
  Tolerance tol;
  if (c.tol_rank) tol.rank_factor = *c.tol_rank;
  if (c.tol_resid) tol.residual = *c.tol_resid;
  tol.validate();
  return tol;
}

std::string format_complex(Complex z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

std::string format_matrix(const ComplexMatrix& m, const std::string& indent) {
  std::ostringstream os;
  for (Index i = 0; i < m.rows(); ++i) {
    os << indent << "[";
    for (Index j = 0; j < m.cols(); ++j) {
      os << (j ? ", " : "") << format_complex(m(i, j));
    }
    os << "]\n";
  }
  return os.str();
}

std::string format_report(const VerificationReport& r) {
  std::ostringstream os;
  os << r.theorem << " " << r.instance_id << " lambda=" << format_complex(r.lambda)
     << " n=" << r.dimension << ": " << to_string(r.verdict) << "\n";
  if (!r.message.empty()) os << "  " << r.message << "\n";
  for (const auto* group : {&r.hypothesis, &r.conclusion}) {
    os << (group == &r.hypothesis ? "  hypothesis\n" : "  conclusion\n");
    for (const auto& res : *group) {
      os << "    " << (res.ok() ? "ok  " : "FAIL") << " " << res.name << " = "
         << res.value << " (tol " << res.tolerance << ")\n";
    }
  }
  return os.str();
}

std::string format_summary(const SuiteSummary& s) {
  std::ostringstream os;
  os << "seed " << s.seed << ", " << s.total << " instances\n";
  for (const auto& [tag, cov] : s.theorems) {
    os << "  " << tag;
    for (auto v : {Verdict::Pass, Verdict::HypothesisFail, Verdict::ConclusionFail,
                   Verdict::Unsupported}) {
      const auto it = cov.counts.find(v);
      os << "  " << to_string(v) << "=" << (it == cov.counts.end() ? 0 : it->second);
    }
    os << "\n";
  }
  for (const auto& f : s.failures) {
    os << "  " << to_string(f.verdict) << " " << f.instance_id;
    if (f.provenance) os << " seed=" << f.provenance->seed;
    os << "\n";
  }
  return os.str();
}

// Prints json or text to stdout and writes the JSON to --out when given.
void emit(const Common& c, const Json& j, const std::string& text) {
  if (c.format == "text") {
    std::cout << text;
  } else {
    std::cout << j.dump(2) << "\n";
  }
  if (!c.out.empty()) write_json_file(c.out, j);
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Pass: return kOk;
    case Verdict::HypothesisFail: return kHypothesisFail;
    case Verdict::ConclusionFail: return kConclusionFail;
    case Verdict::Unsupported: return kUnsupported;
  }
  return kIoError;
}

ComplexMatrix read_matrix(const std::string& path) {
  const auto j = read_json_file(path);
  if (j.is_object() && j.contains("matrix")) return matrix_from_json(j.at("matrix"));
  return matrix_from_json(j);
}

std::vector<Complex> parse_complex_list(const std::vector<std::string>& items) {
  std::vector<Complex> out;
  for (const auto& s : items) out.push_back(parse_complex(s));
  return out;
}

struct GenerateArgs {
  std::string theorem;
  std::vector<Index> dims;
  std::string lambda = "1";
  double cond_bound = 10.0;
  std::string mode = "commuting";
};

void add_generate_options(CLI::App* cmd, GenerateArgs& g) {
  cmd->add_option("--dims", g.dims,
                  "Generator dimensions: k1,k2,k3,k4 (T2.1), k,n-k (T2.4), "
                  "n (C2.3, T3.1, T3.3), n,r (T3.5); corollaries as their parent")
      ->delimiter(',');
  cmd->add_option("--lambda", g.lambda, "lambda, e.g. 2, -0.5, 1+i");
  cmd->add_option("--cond-bound", g.cond_bound, "Similarity condition bound")
      ->check(CLI::Range(1.0, 1e8));
  cmd->add_option("--mode", g.mode, "C2.3 mode")
      ->check(CLI::IsMember({"commuting", "orthogonal"}));
}

Provenance make_provenance(const GenerateArgs& g, std::uint64_t seed) {
  const auto tags = all_theorem_tags();
  if (std::find(tags.begin(), tags.end(), g.theorem) == tags.end()) {
    throw Error(ErrorCode::UnknownTheorem, "unknown theorem tag \"" + g.theorem + "\"");
  }
  Provenance p;
  p.generator = "gen_";
  for (char ch : g.theorem) {
    if (ch != '.') p.generator.push_back(ch);
  }
  p.seed = seed;
  p.config.dims = g.dims;
  p.config.lambda = parse_complex(g.lambda);
  p.config.seed = seed;
  p.config.cond_bound = g.cond_bound;
  p.config.mode = g.mode == "orthogonal" ? C23Mode::Orthogonal : C23Mode::Commuting;
  return p;
}

int run_ginv(const Common& c, const std::string& path) {
  const auto a = read_matrix(path);
  const auto tol = make_tolerance(c);
  try {
    const auto r = group_inverse(a, tol);
    auto j = ginv_result_to_json(r);
    j["tolerances"] = {{"rank_factor", tol.rank_factor_for(a.rows(), a.cols())},
                       {"residual", tol.residual},
                       {"max_core_condition", tol.max_core_condition}};
    std::ostringstream text;
    text << "rank " << r.rank << ", rank of square " << r.rank_square
         << ", core condition " << r.core_condition << "\n"
         << "group inverse\n"
         << format_matrix(r.ginv, "  ");
    emit(c, j, text.str());
    return kOk;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotGroupInvertible &&
        e.code() != ErrorCode::IllConditionedCore) {
      throw;
    }
    Json j = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    for (const auto& [k, v] : e.details()) j[k] = v;
    emit(c, j, std::string(to_string(e.code())) + ": " + e.what() + "\n");
    return kNotGroupInvertible;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group inverses of sums and block matrices: compute, verify, fuzz"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--tol-rank", common.tol_rank,
                 "Rank cutoff factor (cutoff = factor * sigma_max); default max(m,n)*eps");
  app.add_option("--tol-resid", common.tol_resid, "Residual tolerance (default 1e-8)");
  app.add_option("--seed", common.seed, "Master seed");
  app.add_option("--out", common.out, "Also write the JSON result to this path");
  app.add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}));

  auto* ginv = app.add_subcommand("ginv", "Group inverse of a matrix file")->fallthrough();
  std::string ginv_path;
  ginv->add_option("matrix", ginv_path, "Matrix JSON file")->required();

  auto* verify_cmd =
      app.add_subcommand("verify", "Verify one instance of a statement")->fallthrough();
  std::string verify_path;
  GenerateArgs verify_gen;
  bool include_unsupported = false;
  bool no_duality = false;
  verify_cmd->add_option("instance", verify_path, "Instance JSON file");
  auto* gen_flag = verify_cmd->add_option("--generate", verify_gen.theorem,
                                          "Generate an instance of this statement");
  add_generate_options(verify_cmd, verify_gen);
  verify_cmd->add_flag("--include-unsupported", include_unsupported,
                       "Evaluate lambda values outside the proven range");
  verify_cmd->add_flag("--no-duality", no_duality, "Skip the mirror comparison");
  verify_cmd->get_option("instance")->excludes(gen_flag);

  auto* suite = app.add_subcommand("suite", "Run the generated suite")->fallthrough();
  SuiteConfig suite_cfg;
  std::vector<std::string> suite_lambdas;
  std::string reports_path;
  suite->add_option("--theorems", suite_cfg.theorems, "Statements (default: all)")
      ->delimiter(',');
  suite->add_option("--count", suite_cfg.count, "Instances per cell")
      ->check(CLI::PositiveNumber);
  suite->add_option("--dims", suite_cfg.dims, "Additive operand sizes")->delimiter(',');
  suite->add_option("--block-dims", suite_cfg.block_dims, "Block sizes")->delimiter(',');
  suite->add_option("--lambdas", suite_lambdas,
                    "lambda grid for every statement (default: per-statement grid)")
      ->delimiter(',');
  suite->add_option("--cond-bound", suite_cfg.cond_bound, "Similarity condition bound");
  suite->add_option("--jobs", suite_cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
  suite->add_option("--reports", reports_path, "Write every report to this JSON file");
  suite->add_flag("--include-unsupported", suite_cfg.options.include_unsupported,
                  "Evaluate lambda values outside the proven range");

  auto* fuzz = app.add_subcommand("fuzz", "Search for counterexamples")->fallthrough();
  FuzzConfig fuzz_cfg;
  std::string fuzz_lambda;
  std::string fuzz_domain = "generated";
  std::string out_dir;
  fuzz->add_option("--theorem", fuzz_cfg.theorem, "Statement tag");
  fuzz->add_option("--trials", fuzz_cfg.trials, "Random trials")->check(CLI::PositiveNumber);
  fuzz->add_option("--perturbation", fuzz_cfg.perturbation,
                   "Relative noise added to generated operands");
  fuzz->add_option("--lambda", fuzz_lambda, "Fix lambda");
  fuzz->add_option("--domain", fuzz_domain, "Entry domain")
      ->check(CLI::IsMember({"generated", "binary", "ternary"}));
  fuzz->add_option("--dim", fuzz_cfg.dim, "Maximum n (exact n when exhaustive)")
      ->check(CLI::PositiveNumber);
  fuzz->add_flag("--exhaustive", fuzz_cfg.exhaustive,
                 "Enumerate every tuple over the binary/ternary alphabet");
  fuzz->add_flag("--include-unsupported", fuzz_cfg.include_unsupported,
                 "Evaluate lambda values outside the proven range");
  fuzz->add_option("--max-findings", fuzz_cfg.max_findings, "Findings to shrink and keep");
  fuzz->add_option("--out-dir", out_dir, "Write shrunk findings as instance files here");

  app.add_subcommand("example26", "Reproduce the worked T2.4 example")->fallthrough();

  auto* generate_cmd =
      app.add_subcommand("generate", "Emit a generated instance file")->fallthrough();
  GenerateArgs gen_args;
  generate_cmd->add_option("theorem", gen_args.theorem, "Statement tag")->required();
  add_generate_options(generate_cmd, gen_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kIoError;
  }

  try {
    const std::uint64_t seed = common.seed.value_or(0);

    if (*ginv) return run_ginv(common, ginv_path);

    if (*verify_cmd) {
      HarnessOptions opts;
      opts.tol = make_tolerance(common);
      opts.include_unsupported = include_unsupported;
      opts.check_duality = !no_duality;
      Instance inst;
      std::optional<Provenance> prov;
      std::string id;
      if (!verify_gen.theorem.empty()) {
        prov = make_provenance(verify_gen, seed);
        inst = regenerate(*prov);
        id = verify_gen.theorem + "/seed" + std::to_string(seed);
      } else if (!verify_path.empty()) {
        auto file = instance_from_json(read_json_file(verify_path));
        inst = std::move(file.instance);
        prov = std::move(file.provenance);
        id = std::filesystem::path(verify_path).stem().string();
      } else {
        std::cerr << "verify: give an instance file or --generate <theorem>\n";
        return kIoError;
      }
      const auto rep = verify(inst, opts, id, prov);
      emit(common, report_to_json(rep), format_report(rep));
      return verdict_exit(rep.verdict);
    }

    if (*suite) {
      suite_cfg.options.tol = make_tolerance(common);
      if (common.seed) suite_cfg.seed = *common.seed;
      suite_cfg.lambdas = parse_complex_list(suite_lambdas);
      std::vector<VerificationReport> reports;
      const auto summary =
          run_suite(suite_cfg, reports_path.empty() ? nullptr : &reports);
      if (!reports_path.empty()) {
        Json all = Json::array();
        for (const auto& r : reports) all.push_back(report_to_json(r, false));
        write_json_file(reports_path, all);
      }
      emit(common, summary_to_json(summary), format_summary(summary));
      const auto it = summary.counts.find(Verdict::ConclusionFail);
      return it == summary.counts.end() || it->second == 0 ? kOk : kConclusionFail;
    }

    if (*fuzz) {
      fuzz_cfg.options.tol = make_tolerance(common);
      if (common.seed) fuzz_cfg.seed = *common.seed;
      if (!fuzz_lambda.empty()) fuzz_cfg.lambda = parse_complex(fuzz_lambda);
      fuzz_cfg.domain = *parse_fuzz_domain(fuzz_domain);
      const auto result = run_fuzz(fuzz_cfg);
      Json findings = Json::array();
      std::ostringstream text;
      text << format_summary(result.summary) << result.total_findings
           << " conclusion failures\n";
      for (std::size_t k = 0; k < result.findings.size(); ++k) {
        const auto& f = result.findings[k];
        Json entry = {{"original", instance_to_json(f.original)},
                      {"shrunk", instance_to_json(f.shrunk)},
                      {"report", report_to_json(f.report, false)}};
        if (!out_dir.empty()) {
          std::filesystem::create_directories(out_dir);
          const auto file =
              std::filesystem::path(out_dir) / ("finding_" + std::to_string(k) + ".json");
          write_json_file(file, instance_to_json(f.shrunk));
          entry["file"] = file.string();
        }
        findings.push_back(std::move(entry));
        text << format_report(f.report);
      }
      Json j = {{"summary", summary_to_json(result.summary)},
                {"total_findings", result.total_findings},
                {"findings", findings}};
      emit(common, j, text.str());
      return result.total_findings == 0 ? kOk : kConclusionFail;
    }

    if (app.got_subcommand("example26")) {
      HarnessOptions opts;
      opts.tol = make_tolerance(common);
      const auto ex = run_example26(opts);
      Json inter = Json::object();
      std::ostringstream text;
      text << format_report(ex.report);
      for (const auto& [name, m] : ex.intermediates) {
        inter[name] = matrix_to_json(m);
        text << "  " << name << "\n" << format_matrix(m, "    ");
      }
      auto j = report_to_json(ex.report);
      j["intermediates"] = inter;
      j["branch"] = "Generic";
      emit(common, j, text.str());
      return verdict_exit(ex.report.verdict);
    }

    if (*generate_cmd) {
      const auto prov = make_provenance(gen_args, seed);
      const auto inst = regenerate(prov);
      const auto j = instance_to_json(inst, prov);
      emit(common, j, j.dump(2) + "\n");
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "grpinv: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "grpinv: " << e.what() << "\n";
    return kIoError;
  }
  return kIoError;
}
