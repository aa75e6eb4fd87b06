#include "grpinv/blockmat.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "grpinv/error.hpp"

namespace grpinv {

namespace {

constexpr double kFailedResidual = std::numeric_limits<double>::max();

double nrm(const ComplexMatrix& m) { return frobenius_norm(m); }

void require_blocks(const BlockScenario& s) {
  const auto n = s.A.rows();
  for (const auto* m : {&s.A, &s.B, &s.C, &s.D}) {
    if (m->rows() != n || m->cols() != n) {
      throw Error(ErrorCode::DimensionMismatch,
                  "block scenario needs four n x n blocks");
    }
  }
}

struct Corners {
  GroupInverseResult a;
  GroupInverseResult d;
};

Corners corners(const BlockScenario& s, const Tolerance& tol) {
  require_blocks(s);
  return {group_inverse(s.A, tol), group_inverse(s.D, tol)};
}

BlockCheck finish(std::vector<NamedResidual> residuals,
                  std::optional<RankPattern> ranks, const Tolerance& tol) {
  BlockCheck c;
  c.tolerance = tol.residual;
  c.pass = std::all_of(residuals.begin(), residuals.end(),
                       [&](const NamedResidual& r) {
                         return r.value <= tol.residual;
                       }) &&
           (!ranks || ranks->equal());
  c.residuals = std::move(residuals);
  c.ranks = ranks;
  return c;
}

RankPattern rank_pattern(const BlockScenario& s, const Tolerance& tol) {
  return {rank_with_tol(s.B, tol), rank_with_tol(s.C, tol),
          rank_with_tol(s.B * s.C, tol), rank_with_tol(s.C * s.B, tol)};
}

NamedResidual rank_spread(const RankPattern& r) {
  const auto [lo, hi] = std::minmax({r.rank_b, r.rank_c, r.rank_bc, r.rank_cb});
  return {"rank pattern spread", static_cast<double>(hi - lo)};
}

NamedResidual idempotency(const char* name, const ComplexMatrix& m) {
  return {name, normalized_residual(m * m - m, nrm(m))};
}

BlockTheorem parent_of(BlockTheorem t) {
  switch (t) {
    case BlockTheorem::C3_2: return BlockTheorem::T3_1;
    case BlockTheorem::C3_4: return BlockTheorem::T3_3;
    case BlockTheorem::C3_6: return BlockTheorem::T3_5;
    default: return t;
  }
}

bool is_corollary(BlockTheorem t) { return parent_of(t) != t; }

std::optional<ComplexMatrix> try_ginv(const ComplexMatrix& m,
                                      const Tolerance& tol) {
  try {
    return group_inverse(m, tol).ginv;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotGroupInvertible ||
        e.code() == ErrorCode::IllConditionedCore) {
      return std::nullopt;
    }
    throw;
  }
}

// Parent-theorem decomposition checks; `msharp` is M^# of the same scenario.
std::vector<NamedResidual> parent_cross_checks(
    const BlockScenario& s, BlockTheorem parent,
    const std::optional<ComplexMatrix>& msharp, const Tolerance& tol) {
  const auto n = s.n();
  const auto z = ComplexMatrix::zero(n, n);
  const Complex l = s.lambda;
  std::vector<NamedResidual> out;

  auto formula_route = [&](AdditiveTheorem t, const ComplexMatrix& p,
                           const ComplexMatrix& q, const char* name) {
    if (!msharp || is_minus_one(l)) return;
    try {
      const auto candidate = evaluate_formula({t, l, p, q}, tol);
      out.push_back({name, relative_error(candidate, *msharp)});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotGroupInvertible &&
          e.code() != ErrorCode::IllConditionedCore) {
        throw;
      }
      out.push_back({name, kFailedResidual});
    }
  };

  switch (parent) {
    case BlockTheorem::T3_1: {
      const auto p = assemble_2x2(s.A, z, s.B, z);
      const auto q = assemble_2x2(z, s.C, z, s.D);
      const auto qs = try_ginv(q, tol);
      out.push_back({"P*Q*Q# - lambda*Q",
                     qs ? normalized_residual(p * q * *qs - l * q,
                                              nrm(p) * nrm(q) * nrm(*qs))
                        : kFailedResidual});
      formula_route(AdditiveTheorem::T2_4, p, q, "additive formula vs M#");
      break;
    }
    case BlockTheorem::T3_3: {
      const auto p = assemble_2x2(s.A, s.C, z, z);
      const auto q = assemble_2x2(z, z, s.B, s.D);
      const auto ps = try_ginv(p, tol);
      out.push_back({"P*P#*Q - lambda*P",
                     ps ? normalized_residual(p * *ps * q - l * p,
                                              nrm(p) * nrm(*ps) * nrm(q))
                        : kFailedResidual});
      formula_route(AdditiveTheorem::C2_5, p, q, "additive formula vs M#");
      break;
    }
    case BlockTheorem::T3_5: {
      const auto ga = group_inverse(s.A, tol);
      const auto gd = group_inverse(s.D, tol);
      const auto p = assemble_2x2(s.A, s.A * s.C, s.D * s.B, s.D);
      const auto q = assemble_2x2(z, ga.spectral_projector * s.C,
                                  gd.spectral_projector * s.B, z);
      const auto m = assemble(s);
      out.push_back({"P*Q", normalized_residual(p * q, nrm(p) * nrm(q))});
      out.push_back({"P + Q - M", normalized_residual(p + q - m, nrm(m))});
      break;
    }
    default:
      break;
  }
  return out;
}

std::vector<NamedResidual> cross_checks_with(
    const BlockScenario& s, const std::optional<ComplexMatrix>& msharp,
    const Tolerance& tol) {
  if (!is_corollary(s.theorem)) {
    return parent_cross_checks(s, s.theorem, msharp, tol);
  }
  const auto mirror = dual(s);
  auto out = parent_cross_checks(mirror, parent_of(s.theorem),
                                 try_ginv(assemble(mirror), tol), tol);
  for (auto& r : out) r.name = "mirror: " + r.name;
  return out;
}

BlockResult checked_msharp(const BlockScenario& s, BlockTheorem t,
                           const Tolerance& tol) {
  BlockScenario local = s;
  local.theorem = t;
  require_blocks(local);
  if (excludes_minus_one(t) && is_minus_one(local.lambda)) {
    throw Error(ErrorCode::LambdaIsMinusOne,
                std::string(to_string(t)) +
                    ": lambda = -1 is excluded (inherited restriction of the "
                    "additive statement its proof relies on)");
  }
  const auto c = check(local, tol);
  for (const auto& r : c.residuals) {
    if (r.value <= tol.residual) continue;
    if (r.name.starts_with("idempotent")) {
      throw Error(ErrorCode::NotIdempotent,
                  r.name + " residual " + std::to_string(r.value),
                  {{r.name, r.value}});
    }
    if (r.name == "rank pattern spread") continue;
    throw Error(ErrorCode::HypothesisViolated,
                "hypothesis " + r.name + " fails with relative residual " +
                    std::to_string(r.value),
                {{r.name, r.value}});
  }
  if (c.ranks && !c.ranks->equal()) {
    throw Error(ErrorCode::RankPatternViolated,
                "rank(B), rank(C), rank(BC), rank(CB) = " +
                    std::to_string(c.ranks->rank_b) + ", " +
                    std::to_string(c.ranks->rank_c) + ", " +
                    std::to_string(c.ranks->rank_bc) + ", " +
                    std::to_string(c.ranks->rank_cb),
                {{"rank_b", c.ranks->rank_b},
                 {"rank_c", c.ranks->rank_c},
                 {"rank_bc", c.ranks->rank_bc},
                 {"rank_cb", c.ranks->rank_cb}});
  }

  const auto m = assemble(local);
  const auto gm = group_inverse(m, tol);
  BlockResult out;
  out.msharp = gm.ginv;
  out.rank_m = gm.rank;
  out.rank_m2 = gm.rank_square;
  out.axioms = verify_group_axioms(m, gm.ginv, tol);
  out.cross_checks = cross_checks_with(local, gm.ginv, tol);
  return out;
}

}  // namespace

std::string_view to_string(BlockTheorem t) {
  switch (t) {
    case BlockTheorem::T3_1: return "T3.1";
    case BlockTheorem::C3_2: return "C3.2";
    case BlockTheorem::T3_3: return "T3.3";
    case BlockTheorem::C3_4: return "C3.4";
    case BlockTheorem::T3_5: return "T3.5";
    case BlockTheorem::C3_6: return "C3.6";
  }
  return "?";
}

std::optional<BlockTheorem> parse_block_theorem(std::string_view tag) {
  for (auto t : {BlockTheorem::T3_1, BlockTheorem::C3_2, BlockTheorem::T3_3,
                 BlockTheorem::C3_4, BlockTheorem::T3_5, BlockTheorem::C3_6}) {
    if (to_string(t) == tag) return t;
  }
  return std::nullopt;
}

bool excludes_minus_one(BlockTheorem t) {
  return t != BlockTheorem::T3_5 && t != BlockTheorem::C3_6;
}

ComplexMatrix assemble(const BlockScenario& s) {
  require_blocks(s);
  return assemble_2x2(s.A, s.C, s.B, s.D);
}

Blocks split(const ComplexMatrix& m, Index n) {
  if (m.rows() != 2 * n || m.cols() != 2 * n) {
    throw Error(ErrorCode::DimensionMismatch, "split: matrix is not 2n x 2n");
  }
  return {m.block(0, 0, n, n), m.block(n, 0, n, n), m.block(0, n, n, n),
          m.block(n, n, n, n)};
}

BlockCheck check_T31(const BlockScenario& s, const Tolerance& tol) {
  const auto [ga, gd] = corners(s, tol);
  const Complex l = s.lambda;
  const auto& api = ga.spectral_projector;
  const auto& dpi = gd.spectral_projector;
  const auto& ds = gd.ginv;
  return finish(
      {{"A^pi*B", normalized_residual(api * s.B, nrm(api) * nrm(s.B))},
       {"D^pi*C", normalized_residual(dpi * s.C, nrm(dpi) * nrm(s.C))},
       {"A*C*D# - lambda*C",
        normalized_residual(s.A * s.C * ds - l * s.C,
                            nrm(s.A) * nrm(s.C) * nrm(ds))},
       {"B*C*D# - lambda*D",
        normalized_residual(s.B * s.C * ds - l * s.D,
                            nrm(s.B) * nrm(s.C) * nrm(ds))}},
      std::nullopt, tol);
}

BlockCheck check_C32(const BlockScenario& s, const Tolerance& tol) {
  const auto [ga, gd] = corners(s, tol);
  const Complex l = s.lambda;
  const auto& api = ga.spectral_projector;
  const auto& dpi = gd.spectral_projector;
  const auto& as = ga.ginv;
  return finish(
      {{"C*D^pi", normalized_residual(s.C * dpi, nrm(s.C) * nrm(dpi))},
       {"B*A^pi", normalized_residual(s.B * api, nrm(s.B) * nrm(api))},
       {"A#*B*D - lambda*B",
        normalized_residual(as * s.B * s.D - l * s.B,
                            nrm(as) * nrm(s.B) * nrm(s.D))},
       {"A#*B*C - lambda*A",
        normalized_residual(as * s.B * s.C - l * s.A,
                            nrm(as) * nrm(s.B) * nrm(s.C))}},
      std::nullopt, tol);
}

BlockCheck check_T33(const BlockScenario& s, const Tolerance& tol) {
  const auto [ga, gd] = corners(s, tol);
  const Complex l = s.lambda;
  const auto& api = ga.spectral_projector;
  const auto& dpi = gd.spectral_projector;
  const auto& pa = ga.group_projector;
  return finish(
      {{"A^pi*C", normalized_residual(api * s.C, nrm(api) * nrm(s.C))},
       {"D^pi*B", normalized_residual(dpi * s.B, nrm(dpi) * nrm(s.B))},
       {"A#*A*B - lambda*A",
        normalized_residual(pa * s.B - l * s.A, nrm(pa) * nrm(s.B))},
       {"A#*A*D - lambda*C",
        normalized_residual(pa * s.D - l * s.C, nrm(pa) * nrm(s.D))}},
      std::nullopt, tol);
}

BlockCheck check_C34(const BlockScenario& s, const Tolerance& tol) {
  const auto [ga, gd] = corners(s, tol);
  const Complex l = s.lambda;
  const auto& api = ga.spectral_projector;
  const auto& dpi = gd.spectral_projector;
  const auto& pd = gd.group_projector;
  return finish(
      {{"B*D^pi", normalized_residual(s.B * dpi, nrm(s.B) * nrm(dpi))},
       {"C*A^pi", normalized_residual(s.C * api, nrm(s.C) * nrm(api))},
       {"C*D*D# - lambda*D",
        normalized_residual(s.C * pd - l * s.D, nrm(s.C) * nrm(pd))},
       {"A*D*D# - lambda*B",
        normalized_residual(s.A * pd - l * s.B, nrm(s.A) * nrm(pd))}},
      std::nullopt, tol);
}

BlockCheck check_T35(const BlockScenario& s, const Tolerance& tol) {
  const auto [ga, gd] = corners(s, tol);
  const Complex l = s.lambda;
  const auto id = ComplexMatrix::identity(s.n());
  const auto& api = ga.spectral_projector;
  const auto ranks = rank_pattern(s, tol);
  return finish(
      {idempotency("idempotent A", s.A), idempotency("idempotent D", s.D),
       rank_spread(ranks),
       {"A*D - lambda*A*C",
        normalized_residual(s.A * s.D - l * (s.A * s.C),
                            nrm(s.A) * std::max(nrm(s.D), nrm(s.C)))},
       {"A*(I - C*B)",
        normalized_residual(s.A * (id - s.C * s.B),
                            nrm(s.A) * std::max(1.0, nrm(s.C) * nrm(s.B)))},
       {"D*B*A^pi*C",
        normalized_residual(s.D * s.B * api * s.C,
                            nrm(s.D) * nrm(s.B) * nrm(api) * nrm(s.C))}},
      ranks, tol);
}

BlockCheck check_C36(const BlockScenario& s, const Tolerance& tol) {
  const auto [ga, gd] = corners(s, tol);
  const Complex l = s.lambda;
  const auto id = ComplexMatrix::identity(s.n());
  const auto& dpi = gd.spectral_projector;
  const auto ranks = rank_pattern(s, tol);
  return finish(
      {idempotency("idempotent A", s.A), idempotency("idempotent D", s.D),
       rank_spread(ranks),
       {"A*D - lambda*B*D",
        normalized_residual(s.A * s.D - l * (s.B * s.D),
                            nrm(s.D) * std::max(nrm(s.A), nrm(s.B)))},
       {"(I - C*B)*D",
        normalized_residual((id - s.C * s.B) * s.D,
                            nrm(s.D) * std::max(1.0, nrm(s.C) * nrm(s.B)))},
       {"B*D^pi*C*A",
        normalized_residual(s.B * dpi * s.C * s.A,
                            nrm(s.B) * nrm(dpi) * nrm(s.C) * nrm(s.A))}},
      ranks, tol);
}

BlockCheck check(const BlockScenario& s, const Tolerance& tol) {
  switch (s.theorem) {
    case BlockTheorem::T3_1: return check_T31(s, tol);
    case BlockTheorem::C3_2: return check_C32(s, tol);
    case BlockTheorem::T3_3: return check_T33(s, tol);
    case BlockTheorem::C3_4: return check_C34(s, tol);
    case BlockTheorem::T3_5: return check_T35(s, tol);
    case BlockTheorem::C3_6: return check_C36(s, tol);
  }
  return {};
}

BlockResult msharp_T31(const BlockScenario& s, const Tolerance& tol) {
  return checked_msharp(s, BlockTheorem::T3_1, tol);
}
BlockResult msharp_C32(const BlockScenario& s, const Tolerance& tol) {
  return checked_msharp(s, BlockTheorem::C3_2, tol);
}
BlockResult msharp_T33(const BlockScenario& s, const Tolerance& tol) {
  return checked_msharp(s, BlockTheorem::T3_3, tol);
}
BlockResult msharp_C34(const BlockScenario& s, const Tolerance& tol) {
  return checked_msharp(s, BlockTheorem::C3_4, tol);
}
BlockResult msharp_T35(const BlockScenario& s, const Tolerance& tol) {
  return checked_msharp(s, BlockTheorem::T3_5, tol);
}
BlockResult msharp_C36(const BlockScenario& s, const Tolerance& tol) {
  return checked_msharp(s, BlockTheorem::C3_6, tol);
}

BlockResult msharp(const BlockScenario& s, const Tolerance& tol) {
  return checked_msharp(s, s.theorem, tol);
}

std::vector<NamedResidual> cross_checks(const BlockScenario& s,
                                        const Tolerance& tol) {
  require_blocks(s);
  return cross_checks_with(s, try_ginv(assemble(s), tol), tol);
}

BlockScenario dual(const BlockScenario& s) {
  BlockScenario d{s.theorem, s.lambda, transpose(s.D), transpose(s.C),
                  transpose(s.B), transpose(s.A)};
  switch (s.theorem) {
    case BlockTheorem::T3_1: d.theorem = BlockTheorem::C3_2; break;
    case BlockTheorem::C3_2: d.theorem = BlockTheorem::T3_1; break;
    case BlockTheorem::T3_3: d.theorem = BlockTheorem::C3_4; break;
    case BlockTheorem::C3_4: d.theorem = BlockTheorem::T3_3; break;
    case BlockTheorem::T3_5: d.theorem = BlockTheorem::C3_6; break;
    case BlockTheorem::C3_6: d.theorem = BlockTheorem::T3_5; break;
  }
  return d;
}

ComplexMatrix undual(const ComplexMatrix& mirror_msharp) {
  return transpose(mirror_msharp);
}

KDiagnostic k_diagnostic(const BlockScenario& s, const Tolerance& tol) {
  require_blocks(s);
  const auto z = ComplexMatrix::zero(s.n(), s.n());
  const auto k = assemble_2x2(z, s.C, s.B, z);
  const auto info = is_group_invertible(k, tol);
  return {info.rank, info.rank_square,
          rank_with_tol(s.C * s.B, tol) + rank_with_tol(s.B * s.C, tol)};
}

}  // namespace grpinv
