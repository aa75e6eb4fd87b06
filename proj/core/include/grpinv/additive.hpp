#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grpinv/ginv.hpp"
#include "grpinv/matrix.hpp"

namespace grpinv {

// Additive group-inverse statements for a + b.
//   T2_1: a b b^# = lambda b a a^#
//   C2_2: a a^# b = lambda b b^# a            (opposite-algebra mirror of T2_1)
//   C2_3: a, b idempotent with a b = lambda b a
//   T2_4: a b b^# = lambda b, lambda != -1
//   C2_5: a a^# b = lambda a, lambda != -1    (mirror of T2_4)
enum class AdditiveTheorem { T2_1, C2_2, C2_3, T2_4, C2_5 };

std::string_view to_string(AdditiveTheorem t);
std::optional<AdditiveTheorem> parse_additive_theorem(std::string_view tag);

struct AdditiveScenario {
  AdditiveTheorem theorem = AdditiveTheorem::T2_1;
  Complex lambda{0.0, 0.0};
  ComplexMatrix a;
  ComplexMatrix b;
};

enum class Branch { LambdaMinusOne, Generic };
std::string_view to_string(Branch b);

struct NamedResidual {
  std::string name;
  double value = 0.0;
};

struct FormulaOutput {
  ComplexMatrix candidate;
  Branch branch = Branch::Generic;
  std::vector<NamedResidual> hypothesis_residuals;
  AxiomReport axioms;
  // ‖candidate - group_inverse(a + b)‖ / ‖group_inverse(a + b)‖, absent when
  // a + b is not group invertible under the tolerance.
  std::optional<double> oracle_distance;
  // 1e-12 < |lambda + 1| < 1e-6: the generic branch divides by a tiny 1 + lambda.
  bool near_branch = false;
};

// |lambda + 1| at or below this selects the lambda = -1 branch.
inline constexpr double kBranchTolerance = 1e-12;
inline constexpr double kNearBranchBand = 1e-6;

bool is_minus_one(Complex lambda);
bool is_zero(Complex lambda);

// Throws UnsupportedLambda (lambda = 0 for T2_1, C2_2, C2_3) or
// LambdaIsMinusOne (T2_4, C2_5).
void require_supported_lambda(AdditiveTheorem t, Complex lambda);

double residual_T21(const ComplexMatrix& a, const ComplexMatrix& b,
                    Complex lambda, const Tolerance& tol = {});
double residual_C22(const ComplexMatrix& a, const ComplexMatrix& b,
                    Complex lambda, const Tolerance& tol = {});
double residual_T24(const ComplexMatrix& a, const ComplexMatrix& b,
                    Complex lambda, const Tolerance& tol = {});
double residual_C25(const ComplexMatrix& a, const ComplexMatrix& b,
                    Complex lambda, const Tolerance& tol = {});

// All hypothesis residuals of the scenario's theorem, by name.
std::vector<NamedResidual> hypothesis_residuals(const AdditiveScenario& s,
                                                const Tolerance& tol = {});

// Evaluates the theorem's closed form for (a + b)^# without checking lambda
// support or hypotheses. Used for regressions and fuzzing.
ComplexMatrix evaluate_formula(const AdditiveScenario& s,
                               const Tolerance& tol = {});
Branch branch_for(AdditiveTheorem t, Complex lambda);

// Checked entry points: lambda support, group invertibility of the operands
// and hypotheses are enforced before the formula is evaluated.
FormulaOutput sum_ginv_T21(const AdditiveScenario& s, const Tolerance& tol = {});
FormulaOutput sum_ginv_C22(const AdditiveScenario& s, const Tolerance& tol = {});
FormulaOutput idempotent_sum_C23(const AdditiveScenario& s,
                                 const Tolerance& tol = {});
FormulaOutput sum_ginv_T24(const AdditiveScenario& s, const Tolerance& tol = {});
FormulaOutput sum_ginv_C25(const AdditiveScenario& s, const Tolerance& tol = {});

// Dispatches on s.theorem.
FormulaOutput sum_ginv(const AdditiveScenario& s, const Tolerance& tol = {});

// Mirror scenario in the opposite algebra, realized as (b^T, a^T):
// T2_1 <-> C2_2, T2_4 <-> C2_5, C2_3 -> C2_3. The mirror's (a + b)^# is the
// transpose of the original's.
AdditiveScenario dual(const AdditiveScenario& s);

}  // namespace grpinv
