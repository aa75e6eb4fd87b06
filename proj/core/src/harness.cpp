#include "grpinv/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "grpinv/error.hpp"
#include "grpinv/random.hpp"

namespace grpinv {

namespace {

constexpr double kFailed = std::numeric_limits<double>::max();

double sanitize(double v) {
  return std::isfinite(v) ? std::max(v, 0.0) : kFailed;
}

void add(std::vector<Residual>& out, std::string name, double value,
         double tolerance) {
  out.push_back({std::move(name), sanitize(value), tolerance});
}

bool all_ok(const std::vector<Residual>& rs) {
  return std::all_of(rs.begin(), rs.end(),
                     [](const Residual& r) { return r.ok(); });
}

std::string first_failure(const std::vector<Residual>& rs) {
  for (const auto& r : rs) {
    if (!r.ok()) {
      return r.name + " = " + std::to_string(r.value) + " exceeds " +
             std::to_string(r.tolerance);
    }
  }
  return {};
}

std::string rank_defect_name(const std::string& label) {
  const auto sq = label.find('+') == std::string::npos ? label : "(" + label + ")";
  return "rank(" + label + ") - rank(" + sq + "^2)";
}

// Group inverse of an operand, recording the failure as a hypothesis residual.
std::optional<GroupInverseResult> operand_ginv(const std::string& label,
                                               const ComplexMatrix& m,
                                               const Tolerance& tol,
                                               std::vector<Residual>& out) {
  try {
    auto g = group_inverse(m, tol);
    add(out, rank_defect_name(label), 0.0, 0.0);
    return g;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotGroupInvertible) {
      const auto& d = e.details();
      add(out, rank_defect_name(label), d.at("rank") - d.at("rank_square"), 0.0);
    } else if (e.code() == ErrorCode::IllConditionedCore) {
      add(out, "core condition of " + label, e.details().at("core_condition"),
          tol.max_core_condition);
    } else {
      throw;
    }
    return std::nullopt;
  }
}

void add_axioms(std::vector<Residual>& out, const std::string& label,
                const AxiomReport& ax) {
  add(out, label + ": a*x*a - a", ax.axa, ax.tolerance);
  add(out, label + ": x*a*x - x", ax.xax, ax.tolerance);
  add(out, label + ": a*x - x*a", ax.commute, ax.tolerance);
}

bool is_additive_corollary(AdditiveTheorem t) {
  return t == AdditiveTheorem::C2_2 || t == AdditiveTheorem::C2_5;
}

bool is_block_corollary(BlockTheorem t) {
  return t == BlockTheorem::C3_2 || t == BlockTheorem::C3_4 ||
         t == BlockTheorem::C3_6;
}

void verify_additive(const AdditiveScenario& s, const HarnessOptions& opts,
                     VerificationReport& rep) {
  const auto& tol = opts.tol;
  if (!opts.include_unsupported) {
    try {
      require_supported_lambda(s.theorem, s.lambda);
    } catch (const Error& e) {
      rep.verdict = Verdict::Unsupported;
      rep.message = e.what();
      return;
    }
  }

  bool operands_ok = true;
  if (s.theorem != AdditiveTheorem::C2_3) {
    operands_ok = operand_ginv("a", s.a, tol, rep.hypothesis).has_value();
    operands_ok = operand_ginv("b", s.b, tol, rep.hypothesis).has_value() &&
                  operands_ok;
  }
  if (operands_ok) {
    for (const auto& r : hypothesis_residuals(s, tol)) {
      add(rep.hypothesis, r.name, r.value, tol.residual);
    }
  }
  if (!all_ok(rep.hypothesis)) {
    rep.verdict = Verdict::HypothesisFail;
    rep.message = first_failure(rep.hypothesis);
    return;
  }

  const auto candidate = evaluate_formula(s, tol);
  const auto sum = s.a + s.b;
  add_axioms(rep.conclusion, "a+b", verify_group_axioms(sum, candidate, tol));
  if (const auto oracle = operand_ginv("a+b", sum, tol, rep.conclusion)) {
    add(rep.conclusion, "formula vs group_inverse(a+b)",
        relative_error(candidate, oracle->ginv), tol.residual);
  }
  if (opts.check_duality && is_additive_corollary(s.theorem)) {
    double d = kFailed;
    try {
      d = entrywise_distance(candidate, transpose(evaluate_formula(dual(s), tol)));
    } catch (const Error&) {
    }
    add(rep.conclusion, "mirror of parent formula", d, opts.duality_tol);
  }
  const double gap = std::abs(s.lambda + 1.0);
  if (gap > kBranchTolerance && gap < kNearBranchBand) {
    rep.message = "lambda within 1e-6 of -1: generic branch divides by a small 1 + lambda";
  }
  rep.candidate = candidate;
}

void verify_block(const BlockScenario& s, const HarnessOptions& opts,
                  VerificationReport& rep) {
  const auto& tol = opts.tol;
  if (!opts.include_unsupported && excludes_minus_one(s.theorem) &&
      is_minus_one(s.lambda)) {
    rep.verdict = Verdict::Unsupported;
    rep.message = std::string(to_string(s.theorem)) +
                  ": lambda = -1 is excluded (inherited restriction: the "
                  "proof goes through the lambda != -1 additive statement)";
    return;
  }

  const bool corners_ok =
      operand_ginv("A", s.A, tol, rep.hypothesis).has_value() &
      operand_ginv("D", s.D, tol, rep.hypothesis).has_value();
  if (corners_ok) {
    const auto c = check(s, tol);
    for (const auto& r : c.residuals) {
      add(rep.hypothesis, r.name, r.value,
          r.name == "rank pattern spread" ? 0.0 : tol.residual);
    }
    if (c.ranks) {
      rep.message = "rank(B), rank(C), rank(BC), rank(CB) = " +
                    std::to_string(c.ranks->rank_b) + ", " +
                    std::to_string(c.ranks->rank_c) + ", " +
                    std::to_string(c.ranks->rank_bc) + ", " +
                    std::to_string(c.ranks->rank_cb);
    }
  }
  if (!all_ok(rep.hypothesis)) {
    rep.verdict = Verdict::HypothesisFail;
    rep.message = first_failure(rep.hypothesis) +
                  (rep.message.empty() ? "" : "; " + rep.message);
    return;
  }

  const auto m = assemble(s);
  const auto gm = operand_ginv("M", m, tol, rep.conclusion);
  if (!gm) return;
  add_axioms(rep.conclusion, "M", verify_group_axioms(m, gm->ginv, tol));
  for (const auto& r : cross_checks(s, tol)) {
    add(rep.conclusion, r.name, r.value, tol.residual);
  }
  if (s.theorem == BlockTheorem::T3_5 || s.theorem == BlockTheorem::C3_6) {
    const auto k = k_diagnostic(s, tol);
    add(rep.conclusion, "rank(K^2) - rank(CB) - rank(BC)",
        std::abs(k.rank_k2 - k.rank_cb_plus_bc), 0.0);
  }
  if (opts.check_duality && is_block_corollary(s.theorem)) {
    double d = kFailed;
    try {
      const auto mirror = group_inverse(assemble(dual(s)), tol).ginv;
      d = entrywise_distance(gm->ginv, undual(mirror));
    } catch (const Error&) {
    }
    add(rep.conclusion, "mirror of parent M#", d, opts.duality_tol);
  }
  rep.candidate = gm->ginv;
}

std::string generator_name(const std::string& tag) {
  std::string out = "gen_";
  for (char c : tag) {
    if (c != '.') out.push_back(c);
  }
  return out;
}

std::string tag_from_generator(const std::string& gen) {
  for (const auto& tag : all_theorem_tags()) {
    if (generator_name(tag) == gen) return tag;
  }
  throw Error(ErrorCode::UnknownTheorem, "unknown generator \"" + gen + "\"");
}

Json residuals_to_json(const std::vector<Residual>& rs) {
  Json out = Json::array();
  for (const auto& r : rs) {
    out.push_back({{"name", r.name}, {"value", r.value}, {"tolerance", r.tolerance}});
  }
  return out;
}

std::vector<Residual> residuals_from_json(const Json& j) {
  std::vector<Residual> out;
  for (const auto& r : j) {
    out.push_back({r.at("name").get<std::string>(), r.at("value").get<double>(),
                   r.at("tolerance").get<double>()});
  }
  return out;
}

Json counts_to_json(const std::map<Verdict, int>& counts) {
  Json out = Json::object();
  for (auto v : {Verdict::Pass, Verdict::HypothesisFail, Verdict::ConclusionFail,
                 Verdict::Unsupported}) {
    const auto it = counts.find(v);
    out[std::string(to_string(v))] = it == counts.end() ? 0 : it->second;
  }
  return out;
}

bool is_additive_tag(const std::string& tag) {
  return parse_additive_theorem(tag).has_value();
}

// Dimension pattern for one suite instance of total size n.
std::vector<Index> dims_for(const std::string& tag, Index n, int index,
                            Engine& engine) {
  if (tag == "T2.1" || tag == "C2.2") {
    std::vector<Index> k(4, 0);
    std::uniform_int_distribution<int> part(0, 3);
    for (Index i = 0; i < n; ++i) ++k[static_cast<std::size_t>(part(engine))];
    return k;
  }
  if (tag == "T2.4" || tag == "C2.5") {
    const Index k = std::uniform_int_distribution<Index>(1, n)(engine);
    return {k, n - k};
  }
  if (tag == "T3.5" || tag == "C3.6") {
    return {n, static_cast<Index>(index % (n + 1))};
  }
  return {n};
}

struct SuiteTask {
  std::string tag;
  Complex lambda;
  Index n = 0;
  int index = 0;
  std::uint64_t seed = 0;
  std::string id;
};

VerificationReport run_task(const SuiteTask& task, double cond_bound,
                            const HarnessOptions& opts) {
  Engine engine(derive_seed(task.seed, 99));
  GeneratorConfig cfg;
  cfg.dims = dims_for(task.tag, task.n, task.index, engine);
  cfg.lambda = task.lambda;
  cfg.seed = task.seed;
  cfg.cond_bound = cond_bound;
  cfg.mode = std::abs(task.lambda - 1.0) <= 1e-12 ? C23Mode::Commuting
                                                 : C23Mode::Orthogonal;
  Provenance prov{generator_name(task.tag), task.seed, cfg};
  try {
    return verify(regenerate(prov), opts, task.id, prov);
  } catch (const Error& e) {
    VerificationReport rep;
    rep.instance_id = task.id;
    rep.theorem = task.tag;
    rep.lambda = task.lambda;
    rep.dimension = task.n;
    rep.verdict = Verdict::Unsupported;
    rep.message = std::string("generator: ") + e.what();
    return rep;
  }
}

std::vector<ComplexMatrix> operands(const Instance& inst) {
  if (const auto* a = std::get_if<AdditiveScenario>(&inst)) return {a->a, a->b};
  const auto& s = std::get<BlockScenario>(inst);
  return {s.A, s.B, s.C, s.D};
}

Instance with_operands(const Instance& inst, std::vector<ComplexMatrix> ops) {
  if (const auto* a = std::get_if<AdditiveScenario>(&inst)) {
    return AdditiveScenario{a->theorem, a->lambda, std::move(ops[0]),
                            std::move(ops[1])};
  }
  const auto& s = std::get<BlockScenario>(inst);
  return BlockScenario{s.theorem, s.lambda, std::move(ops[0]), std::move(ops[1]),
                       std::move(ops[2]), std::move(ops[3])};
}

double snap_component(double x) {
  static constexpr double kTargets[] = {0.0, 1.0, -1.0, 0.5, -0.5, 2.0, -2.0};
  double best = kTargets[0];
  for (double t : kTargets) {
    if (std::abs(x - t) < std::abs(x - best)) best = t;
  }
  return best;
}

Instance make_instance(const std::string& tag, Complex lambda,
                       std::vector<ComplexMatrix> ops) {
  if (auto t = parse_additive_theorem(tag)) {
    return AdditiveScenario{*t, lambda, std::move(ops[0]), std::move(ops[1])};
  }
  return BlockScenario{*parse_block_theorem(tag), lambda, std::move(ops[0]),
                       std::move(ops[1]), std::move(ops[2]), std::move(ops[3])};
}

bool lambda_supported(const std::string& tag, Complex l) {
  if (auto t = parse_additive_theorem(tag)) {
    try {
      require_supported_lambda(*t, l);
      return true;
    } catch (const Error&) {
      return false;
    }
  }
  return !(excludes_minus_one(*parse_block_theorem(tag)) && is_minus_one(l));
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::HypothesisFail: return "HypothesisFail";
    case Verdict::ConclusionFail: return "ConclusionFail";
    case Verdict::Unsupported: return "Unsupported";
  }
  return "?";
}

std::optional<Verdict> parse_verdict(std::string_view s) {
  for (auto v : {Verdict::Pass, Verdict::HypothesisFail, Verdict::ConclusionFail,
                 Verdict::Unsupported}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::string_view to_string(FuzzDomain d) {
  switch (d) {
    case FuzzDomain::Generated: return "generated";
    case FuzzDomain::Binary: return "binary";
    case FuzzDomain::Ternary: return "ternary";
  }
  return "?";
}

std::optional<FuzzDomain> parse_fuzz_domain(std::string_view s) {
  for (auto d : {FuzzDomain::Generated, FuzzDomain::Binary, FuzzDomain::Ternary}) {
    if (to_string(d) == s) return d;
  }
  return std::nullopt;
}

VerificationReport verify(const Instance& inst, const HarnessOptions& opts,
                          std::string instance_id,
                          std::optional<Provenance> provenance) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.instance_id = std::move(instance_id);
  rep.theorem = theorem_tag(inst);
  rep.lambda = instance_lambda(inst);
  rep.dimension = instance_dimension(inst);
  rep.provenance = std::move(provenance);
  const Index full = std::holds_alternative<BlockScenario>(inst)
                         ? 2 * rep.dimension
                         : rep.dimension;
  rep.tolerances = {{"rank_factor", opts.tol.rank_factor_for(full, full)},
                    {"residual", opts.tol.residual},
                    {"duality", opts.duality_tol},
                    {"max_core_condition", opts.tol.max_core_condition}};
  rep.verdict = Verdict::Pass;

  try {
    if (const auto* a = std::get_if<AdditiveScenario>(&inst)) {
      verify_additive(*a, opts, rep);
    } else {
      verify_block(std::get<BlockScenario>(inst), opts, rep);
    }
    if (rep.verdict == Verdict::Pass) {
      if (!all_ok(rep.hypothesis)) {
        rep.verdict = Verdict::HypothesisFail;
      } else if (!all_ok(rep.conclusion)) {
        rep.verdict = Verdict::ConclusionFail;
        rep.message = first_failure(rep.conclusion);
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DimensionMismatch ||
        e.code() == ErrorCode::NonSquare) {
      throw;
    }
    rep.verdict = rep.hypothesis.empty() || !all_ok(rep.hypothesis)
                      ? Verdict::HypothesisFail
                      : Verdict::ConclusionFail;
    rep.message = std::string(to_string(e.code())) + ": " + e.what();
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start)
                    .count();
  return rep;
}

Json report_to_json(const VerificationReport& r, bool include_timing) {
  Json j = {{"id", r.instance_id},
            {"theorem", r.theorem},
            {"lambda", complex_to_json(r.lambda)},
            {"dimension", r.dimension},
            {"verdict", std::string(to_string(r.verdict))},
            {"message", r.message},
            {"hypothesis", residuals_to_json(r.hypothesis)},
            {"conclusion", residuals_to_json(r.conclusion)},
            {"tolerances", r.tolerances}};
  if (include_timing) j["seconds"] = r.seconds;
  if (r.provenance) j["provenance"] = provenance_to_json(*r.provenance);
  if (r.candidate) j["candidate"] = matrix_to_json(*r.candidate);
  return j;
}

VerificationReport report_from_json(const Json& j) try {
  VerificationReport r;
  r.instance_id = j.at("id").get<std::string>();
  r.theorem = j.at("theorem").get<std::string>();
  r.lambda = complex_from_json(j.at("lambda"));
  r.dimension = j.at("dimension").get<Index>();
  const auto v = parse_verdict(j.at("verdict").get<std::string>());
  if (!v) throw Error(ErrorCode::Parse, "unknown verdict");
  r.verdict = *v;
  r.message = j.at("message").get<std::string>();
  r.hypothesis = residuals_from_json(j.at("hypothesis"));
  r.conclusion = residuals_from_json(j.at("conclusion"));
  r.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
  if (j.contains("seconds")) r.seconds = j.at("seconds").get<double>();
  if (j.contains("provenance")) r.provenance = provenance_from_json(j.at("provenance"));
  if (j.contains("candidate")) r.candidate = matrix_from_json(j.at("candidate"));
  return r;
} catch (const Json::exception& e) {
  throw Error(ErrorCode::Parse, std::string("malformed report: ") + e.what());
}

Instance regenerate(const Provenance& p) {
  const auto tag = tag_from_generator(p.generator);
  GeneratorConfig cfg = p.config;
  cfg.seed = p.seed;
  if (auto t = parse_additive_theorem(tag)) return generate(*t, cfg).instance;
  return generate(*parse_block_theorem(tag), cfg).instance;
}

std::vector<std::string> all_theorem_tags() {
  return {"T2.1", "C2.2", "C2.3", "T2.4", "C2.5", "T3.1",
          "C3.2", "T3.3", "C3.4", "T3.5", "C3.6"};
}

std::vector<Complex> default_lambda_grid(const std::string& theorem) {
  if (theorem == "T2.1" || theorem == "C2.2" || theorem == "C2.3") {
    return {-2.0, -1.0, -0.5, 0.5, 1.0, 3.0, {1.0, 1.0}};
  }
  if (theorem == "T2.4" || theorem == "C2.5") {
    return {-2.0, 0.0, 0.5, 1.0, 3.0, {1.0, 1.0}};
  }
  if (theorem == "T3.5" || theorem == "C3.6") return {1.0};
  if (parse_block_theorem(theorem)) return {0.5, 1.0, 2.0, {1.0, 1.0}};
  throw Error(ErrorCode::UnknownTheorem, "unknown theorem tag \"" + theorem + "\"");
}

void accumulate(SuiteSummary& summary, const VerificationReport& r) {
  ++summary.total;
  ++summary.counts[r.verdict];
  auto& cov = summary.theorems[r.theorem];
  ++cov.counts[r.verdict];
  if (r.verdict != Verdict::Unsupported) {
    cov.lambdas.insert({r.lambda.real(), r.lambda.imag()});
    cov.dims.insert(r.provenance ? r.provenance->config.dims
                                 : std::vector<Index>{r.dimension});
  }
  for (const auto* group : {&r.hypothesis, &r.conclusion}) {
    // Worst residuals are only meaningful where the residual was evaluated
    // under passing hypotheses; hypothesis residuals are always kept.
    if (group == &r.conclusion && r.verdict == Verdict::HypothesisFail) continue;
    for (const auto& res : *group) {
      auto& w = cov.worst[res.name];
      w = std::max(w, res.value);
    }
  }
  if (r.verdict == Verdict::HypothesisFail || r.verdict == Verdict::ConclusionFail) {
    summary.failures.push_back({r.instance_id, r.theorem, r.verdict, r.provenance});
  }
}

SuiteSummary run_suite(const SuiteConfig& cfg,
                       std::vector<VerificationReport>* reports) {
  cfg.options.tol.validate();
  const auto tags = cfg.theorems.empty() ? all_theorem_tags() : cfg.theorems;
  const auto all = all_theorem_tags();

  std::vector<SuiteTask> tasks;
  for (const auto& tag : tags) {
    const auto pos = std::find(all.begin(), all.end(), tag);
    if (pos == all.end()) {
      throw Error(ErrorCode::UnknownTheorem, "unknown theorem tag \"" + tag + "\"");
    }
    const auto ordinal = static_cast<std::uint64_t>(pos - all.begin());
    const auto lambdas = cfg.lambdas.empty() ? default_lambda_grid(tag) : cfg.lambdas;
    const auto& dims = is_additive_tag(tag) ? cfg.dims : cfg.block_dims;
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      for (std::size_t di = 0; di < dims.size(); ++di) {
        const auto cell = derive_seed(derive_seed(cfg.seed, ordinal),
                                      li * 1000 + di);
        for (int i = 0; i < cfg.count; ++i) {
          SuiteTask t;
          t.tag = tag;
          t.lambda = lambdas[li];
          t.n = dims[di];
          t.index = i;
          t.seed = derive_seed(cell, static_cast<std::uint64_t>(i));
          t.id = tag + "/l" + std::to_string(li) + "/n" + std::to_string(t.n) +
                 "/" + std::to_string(i);
          tasks.push_back(std::move(t));
        }
      }
    }
  }

  std::vector<VerificationReport> results(tasks.size());
  const unsigned jobs = std::max(1u, cfg.jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      results[i] = run_task(tasks[i], cfg.cond_bound, cfg.options);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  SuiteSummary summary;
  summary.seed = cfg.seed;
  summary.tolerances = {{"residual", cfg.options.tol.residual},
                        {"duality", cfg.options.duality_tol},
                        {"max_core_condition", cfg.options.tol.max_core_condition}};
  if (cfg.options.tol.rank_factor) {
    summary.tolerances["rank_factor"] = *cfg.options.tol.rank_factor;
  }
  for (const auto& r : results) accumulate(summary, r);
  if (reports) *reports = std::move(results);
  return summary;
}

Json summary_to_json(const SuiteSummary& s) {
  Json theorems = Json::object();
  for (const auto& [tag, cov] : s.theorems) {
    Json lambdas = Json::array();
    for (const auto& [re, im] : cov.lambdas) lambdas.push_back({re, im});
    Json dims = Json::array();
    for (const auto& d : cov.dims) dims.push_back(d);
    theorems[tag] = {{"counts", counts_to_json(cov.counts)},
                     {"lambdas", lambdas},
                     {"dims", dims},
                     {"worst", cov.worst}};
  }
  Json failures = Json::array();
  for (const auto& f : s.failures) {
    Json j = {{"id", f.instance_id},
              {"theorem", f.theorem},
              {"verdict", std::string(to_string(f.verdict))}};
    if (f.provenance) j["provenance"] = provenance_to_json(*f.provenance);
    failures.push_back(std::move(j));
  }
  return {{"seed", s.seed},
          {"total", s.total},
          {"counts", counts_to_json(s.counts)},
          {"tolerances", s.tolerances},
          {"theorems", theorems},
          {"failures", failures}};
}

Instance shrink(const Instance& inst,
                const std::function<bool(const Instance&)>& still_fails) {
  Instance cur = inst;
  for (bool progress = true; progress;) {
    progress = false;
    auto ops = operands(cur);
    const Index n = ops.front().rows();
    if (n <= 1) break;
    for (Index i = 0; i < n && !progress; ++i) {
      std::vector<ComplexMatrix> smaller;
      for (const auto& m : ops) smaller.push_back(delete_row_col(m, i, i));
      auto cand = with_operands(cur, std::move(smaller));
      if (still_fails(cand)) {
        cur = std::move(cand);
        progress = true;
      }
    }
  }
  const auto count = operands(cur).size();
  for (std::size_t o = 0; o < count; ++o) {
    const Index n = operands(cur)[o].rows();
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        auto ops = operands(cur);
        const Complex z = ops[o](i, j);
        const Complex snapped(snap_component(z.real()), snap_component(z.imag()));
        if (snapped == z) continue;
        DenseMatrix m = ops[o].eigen();
        m(i, j) = snapped;
        ops[o] = ComplexMatrix(std::move(m));
        auto cand = with_operands(cur, std::move(ops));
        if (still_fails(cand)) cur = std::move(cand);
      }
    }
  }
  return cur;
}

FuzzResult run_fuzz(const FuzzConfig& cfg) {
  const auto tags = all_theorem_tags();
  if (std::find(tags.begin(), tags.end(), cfg.theorem) == tags.end()) {
    throw Error(ErrorCode::UnknownTheorem,
                "unknown theorem tag \"" + cfg.theorem + "\"");
  }
  if (cfg.trials < 1 || cfg.dim < 1) {
    throw Error(ErrorCode::ConditionViolated, "fuzz needs trials >= 1 and dim >= 1");
  }
  HarnessOptions opts = cfg.options;
  opts.include_unsupported = cfg.include_unsupported;
  const bool additive = is_additive_tag(cfg.theorem);
  const std::size_t arity = additive ? 2 : 4;

  std::vector<Complex> lambdas;
  if (cfg.lambda) {
    lambdas = {*cfg.lambda};
  } else if (cfg.domain == FuzzDomain::Generated) {
    lambdas = default_lambda_grid(cfg.theorem);
  } else {
    for (Complex l : {Complex(-2.0), Complex(-1.0), Complex(-0.5), Complex(0.0),
                      Complex(0.5), Complex(1.0), Complex(2.0)}) {
      if (cfg.include_unsupported || lambda_supported(cfg.theorem, l)) {
        lambdas.push_back(l);
      }
    }
  }

  FuzzResult result;
  result.summary.seed = cfg.seed;
  auto fails = [&](const Instance& inst) {
    try {
      return verify(inst, opts).verdict == Verdict::ConclusionFail;
    } catch (const Error&) {
      return false;
    }
  };
  auto consider = [&](Instance inst, std::string id,
                      std::optional<Provenance> prov) {
    const auto rep = verify(inst, opts, std::move(id), std::move(prov));
    accumulate(result.summary, rep);
    if (rep.verdict != Verdict::ConclusionFail) return;
    ++result.total_findings;
    if (result.findings.size() >= cfg.max_findings) return;
    auto small = shrink(inst, fails);
    auto small_rep = verify(small, opts, rep.instance_id + "/shrunk");
    result.findings.push_back({std::move(inst), std::move(small),
                               std::move(small_rep)});
  };

  const std::vector<double> alphabet =
      cfg.domain == FuzzDomain::Ternary ? std::vector<double>{-1.0, 0.0, 1.0}
                                        : std::vector<double>{0.0, 1.0};

  if (cfg.exhaustive) {
    if (cfg.domain == FuzzDomain::Generated) {
      throw Error(ErrorCode::ConditionViolated,
                  "exhaustive fuzzing needs the binary or ternary domain");
    }
    const Index n = cfg.dim;
    const auto slots = static_cast<double>(arity * static_cast<std::size_t>(n * n));
    const double cells = std::pow(static_cast<double>(alphabet.size()), slots);
    if (cells > static_cast<double>(1u << 22)) {
      throw Error(ErrorCode::ConditionViolated,
                  "exhaustive space of " + std::to_string(cells) +
                      " tuples is too large; lower --dim");
    }
    const auto total = static_cast<std::uint64_t>(cells);
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t rest = code;
        std::vector<ComplexMatrix> ops;
        for (std::size_t o = 0; o < arity; ++o) {
          DenseMatrix m(n, n);
          for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < n; ++j) {
              m(i, j) = alphabet[rest % alphabet.size()];
              rest /= alphabet.size();
            }
          }
          ops.emplace_back(std::move(m));
        }
        consider(make_instance(cfg.theorem, lambdas[li], std::move(ops)),
                 cfg.theorem + "/exhaustive/l" + std::to_string(li) + "/" +
                     std::to_string(code),
                 std::nullopt);
      }
    }
    return result;
  }

  for (int trial = 0; trial < cfg.trials; ++trial) {
    const auto seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));
    Engine engine(seed);
    const Complex lambda =
        lambdas[std::uniform_int_distribution<std::size_t>(0, lambdas.size() - 1)(engine)];
    const Index n = std::uniform_int_distribution<Index>(1, cfg.dim)(engine);
    const auto id = cfg.theorem + "/fuzz/" + std::to_string(trial);

    if (cfg.domain == FuzzDomain::Generated) {
      SuiteTask task{cfg.theorem, lambda, n, trial, seed, id};
      GeneratorConfig gcfg;
      gcfg.dims = dims_for(cfg.theorem, n, trial, engine);
      gcfg.lambda = lambda;
      gcfg.seed = seed;
      gcfg.cond_bound = cfg.cond_bound;
      gcfg.mode = std::abs(lambda - 1.0) <= 1e-12 ? C23Mode::Commuting
                                                 : C23Mode::Orthogonal;
      Provenance prov{generator_name(cfg.theorem), seed, gcfg};
      Instance inst;
      try {
        inst = regenerate(prov);
      } catch (const Error&) {
        accumulate(result.summary, run_task(task, cfg.cond_bound, opts));
        continue;
      }
      if (cfg.perturbation > 0.0) {
        auto ops = operands(inst);
        for (std::size_t o = 0; o < ops.size(); ++o) {
          const auto& m = ops[o];
          const auto noise = random_general(m.rows(), m.cols(),
                                            derive_seed(seed, 1000 + o));
          const double size = frobenius_norm(m) / std::max(1.0, frobenius_norm(noise));
          ops[o] = m + Complex(cfg.perturbation * size) * noise;
        }
        inst = with_operands(inst, std::move(ops));
      }
      consider(std::move(inst), id, prov);
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
      std::vector<ComplexMatrix> ops;
      for (std::size_t o = 0; o < arity; ++o) {
        DenseMatrix m(n, n);
        for (Index i = 0; i < n; ++i) {
          for (Index j = 0; j < n; ++j) m(i, j) = alphabet[pick(engine)];
        }
        ops.emplace_back(std::move(m));
      }
      consider(make_instance(cfg.theorem, lambda, std::move(ops)), id,
               std::nullopt);
    }
  }
  return result;
}

Example26Result run_example26(const HarnessOptions& opts) {
  const auto a = ComplexMatrix::from_rows({{-1.0, -1.0}, {1.0, -3.0}});
  const auto b = ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 1.0}});
  const Complex lambda = -2.0;
  const auto published_sum_ginv =
      ComplexMatrix::from_rows({{-1.0, 0.0}, {-0.5, -0.5}});
  const auto published_a_ginv =
      ComplexMatrix::from_rows({{-0.75, 0.25}, {-0.25, -0.25}});

  Example26Result out;
  const AdditiveScenario s{AdditiveTheorem::T2_4, lambda, a, b};
  out.report = verify(s, opts, "example-2.6");

  const auto ga = group_inverse(a, opts.tol);
  const auto gb = group_inverse(b, opts.tol);
  const auto candidate = evaluate_formula(s, opts.tol);
  out.intermediates = {{"A#", ga.ginv},
                       {"B#", gb.ginv},
                       {"B^pi", gb.spectral_projector},
                       {"A*B", a * b},
                       {"A+B", a + b},
                       {"(A+B)#", candidate}};

  auto& c = out.report.conclusion;
  add(c, "A# vs published", max_abs(ga.ginv - published_a_ginv), 1e-12);
  add(c, "B# vs B", max_abs(gb.ginv - b), 1e-12);
  add(c, "A*B + 2*B", max_abs(a * b + 2.0 * b), 0.0);
  add(c, "(A+B)# vs published", max_abs(candidate - published_sum_ginv), 1e-12);
  if (out.report.verdict == Verdict::Pass && !all_ok(c)) {
    out.report.verdict = Verdict::ConclusionFail;
    out.report.message = first_failure(c);
  }
  out.report.candidate = candidate;
  return out;
}

}  // namespace grpinv
