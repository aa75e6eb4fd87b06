#pragma once

#include "grpinv/linalg.hpp"
#include "grpinv/matrix.hpp"

namespace grpinv {

struct GroupInvertibility {
  bool invertible = false;
  int rank = 0;
  int rank_square = 0;
  // A singular value of a or a^2 sits within a factor 10 of its rank cutoff,
  // so the rank decision could flip under a slightly different tolerance.
  bool marginal = false;
};

struct GroupInverseResult {
  ComplexMatrix ginv;                // a^#
  int rank = 0;
  ComplexMatrix group_projector;     // a a^#
  ComplexMatrix spectral_projector;  // a^pi = I - a a^#
  double core_condition = 1.0;       // cond(G F) for a = F G
  int rank_square = 0;
  bool marginal = false;
};

// Relative residuals of the three defining identities of x = a^#.
struct AxiomReport {
  double axa = 0.0;      // ‖a x a - a‖ / ‖a‖
  double xax = 0.0;      // ‖x a x - x‖ / ‖x‖
  double commute = 0.0;  // ‖a x - x a‖ / (‖a‖ ‖x‖)
  double tolerance = 0.0;
  bool pass = false;
};

// rank(a) == rank(a^2) under tol. Throws NonSquare.
GroupInvertibility is_group_invertible(const ComplexMatrix& a,
                                       const Tolerance& tol = {});

// Group inverse via the SVD full-rank factorization a = F G with
// F = U_r Sigma_r and G = V_r^*: a^# = F (G F)^{-2} G.
// Throws NotGroupInvertible (details carry both ranks) or IllConditionedCore.
GroupInverseResult group_inverse(const ComplexMatrix& a,
                                 const Tolerance& tol = {});

// Independent route a (a^3)^+ a, with the pseudoinverse truncated to rank(a).
// Evaluated in quadruple precision: a^3 cubes the condition of the core, which
// in double precision would leave the oracle far less accurate than the
// routine it checks. Not used by any formula; kept as a cross-check.
ComplexMatrix group_inverse_cline(const ComplexMatrix& a,
                                  const Tolerance& tol = {});

ComplexMatrix moore_penrose(const ComplexMatrix& a, const Tolerance& tol = {});

ComplexMatrix spectral_projector(const GroupInverseResult& r);

// Group inverse of [[x, y], [0, w]] for group invertible x, w, valid when
// x^pi y w^pi = 0. The off-diagonal block is
//   z = (x^#)^2 y w^pi + x^pi y (w^#)^2 - x^# y w^#.
// Throws ConditionViolated when x^pi y w^pi exceeds the residual tolerance.
ComplexMatrix triangular_block_ginv(const ComplexMatrix& x,
                                    const ComplexMatrix& y,
                                    const ComplexMatrix& w,
                                    const Tolerance& tol = {});

AxiomReport verify_group_axioms(const ComplexMatrix& a, const ComplexMatrix& x,
                                const Tolerance& tol = {});

}  // namespace grpinv
