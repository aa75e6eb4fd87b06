#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grpinv/additive.hpp"
#include "grpinv/ginv.hpp"
#include "grpinv/matrix.hpp"

namespace grpinv {

// Group invertibility of M = [[A, C], [B, D]] with n x n blocks.
//   T3_1: A^pi B = 0, D^pi C = 0, A C D^# = lambda C, B C D^# = lambda D
//   C3_2: C D^pi = 0, B A^pi = 0, A^# B D = lambda B, A^# B C = lambda A
//   T3_3: A^pi C = 0, D^pi B = 0, A^# A B = lambda A, A^# A D = lambda C
//   C3_4: B D^pi = 0, C A^pi = 0, C D D^# = lambda D, A D D^# = lambda B
//   T3_5: A, D idempotent, rank B = rank C = rank BC = rank CB,
//         A D = lambda A C, A (I - C B) = 0, D B A^pi C = 0
//   C3_6: A, D idempotent, same rank pattern,
//         A D = lambda B D, (I - C B) D = 0, B D^pi C A = 0
// T3_1 through C3_4 are reached through the lambda != -1 additive statement,
// so lambda = -1 is rejected for them.
enum class BlockTheorem { T3_1, C3_2, T3_3, C3_4, T3_5, C3_6 };

std::string_view to_string(BlockTheorem t);
std::optional<BlockTheorem> parse_block_theorem(std::string_view tag);
bool excludes_minus_one(BlockTheorem t);

struct BlockScenario {
  BlockTheorem theorem = BlockTheorem::T3_1;
  Complex lambda{0.0, 0.0};
  ComplexMatrix A;
  ComplexMatrix B;
  ComplexMatrix C;
  ComplexMatrix D;

  Index n() const noexcept { return A.rows(); }
};

struct Blocks {
  ComplexMatrix A;
  ComplexMatrix B;
  ComplexMatrix C;
  ComplexMatrix D;
};

// [[A, C], [B, D]]; every block must be n x n.
ComplexMatrix assemble(const BlockScenario& s);
Blocks split(const ComplexMatrix& m, Index n);

struct RankPattern {
  int rank_b = 0;
  int rank_c = 0;
  int rank_bc = 0;
  int rank_cb = 0;
  bool equal() const noexcept {
    return rank_b == rank_c && rank_c == rank_bc && rank_bc == rank_cb;
  }
};

struct BlockCheck {
  std::vector<NamedResidual> residuals;
  std::optional<RankPattern> ranks;  // T3_5 / C3_6 only
  double tolerance = 0.0;
  bool pass = false;
};

struct BlockResult {
  ComplexMatrix msharp;
  AxiomReport axioms;
  int rank_m = 0;
  int rank_m2 = 0;
  // Residuals of the sum decomposition M = P + Q used to reach the conclusion,
  // each normalized by the product of the factor norms.
  std::vector<NamedResidual> cross_checks;
};

// Hypothesis residuals for one statement, evaluated on s's blocks whatever
// s.theorem says. Throws NotGroupInvertible when A or D has no group inverse.
BlockCheck check_T31(const BlockScenario& s, const Tolerance& tol = {});
BlockCheck check_C32(const BlockScenario& s, const Tolerance& tol = {});
BlockCheck check_T33(const BlockScenario& s, const Tolerance& tol = {});
BlockCheck check_C34(const BlockScenario& s, const Tolerance& tol = {});
BlockCheck check_T35(const BlockScenario& s, const Tolerance& tol = {});
BlockCheck check_C36(const BlockScenario& s, const Tolerance& tol = {});
BlockCheck check(const BlockScenario& s, const Tolerance& tol = {});

// M^# by group_inverse on the assembled matrix after the hypotheses pass,
// plus the decomposition cross-checks. Throws HypothesisViolated,
// NotIdempotent, RankPatternViolated, LambdaIsMinusOne or NotGroupInvertible.
BlockResult msharp_T31(const BlockScenario& s, const Tolerance& tol = {});
BlockResult msharp_C32(const BlockScenario& s, const Tolerance& tol = {});
BlockResult msharp_T33(const BlockScenario& s, const Tolerance& tol = {});
BlockResult msharp_C34(const BlockScenario& s, const Tolerance& tol = {});
BlockResult msharp_T35(const BlockScenario& s, const Tolerance& tol = {});
BlockResult msharp_C36(const BlockScenario& s, const Tolerance& tol = {});
BlockResult msharp(const BlockScenario& s, const Tolerance& tol = {});

// Decomposition cross-checks for s.theorem without hypothesis gating.
std::vector<NamedResidual> cross_checks(const BlockScenario& s,
                                        const Tolerance& tol = {});

// Mirror scenario (A, B, C, D) -> (D^T, C^T, B^T, A^T), pairing T3_1 <-> C3_2,
// T3_3 <-> C3_4, T3_5 <-> C3_6. Each corollary's hypotheses on s are exactly
// the parent's hypotheses on dual(s). The mirror assembles to
// [[D^T, B^T], [C^T, A^T]], the transpose of [[D, C], [B, A]], which is in
// general not similar to M.
BlockScenario dual(const BlockScenario& s);

// The transposition step of the corollaries: transpose of the mirror's M^#.
// Equals M^# only when [[D, C], [B, A]] and M have transposed group inverses.
ComplexMatrix undual(const ComplexMatrix& mirror_msharp);

// K = [[0, C], [B, 0]]; when the rank pattern holds, rank(K^2) equals
// rank(CB) + rank(BC) and K is group invertible.
struct KDiagnostic {
  int rank_k = 0;
  int rank_k2 = 0;
  int rank_cb_plus_bc = 0;
};
KDiagnostic k_diagnostic(const BlockScenario& s, const Tolerance& tol = {});

}  // namespace grpinv
