#include "grpinv/additive.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "grpinv/error.hpp"

namespace grpinv {

namespace {

double pair_scale(const ComplexMatrix& a, const ComplexMatrix& b) {
  return frobenius_norm(a) * frobenius_norm(b);
}

void require_pair(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.is_square() || !same_shape(a, b)) {
    throw Error(ErrorCode::DimensionMismatch,
                "additive scenario needs square operands of equal size");
  }
}

std::string format_lambda(Complex l) {
  std::ostringstream os;
  os << l.real() << (l.imag() < 0 ? "-" : "+") << std::abs(l.imag()) << "i";
  return os.str();
}

struct Operands {
  GroupInverseResult ga;
  GroupInverseResult gb;
};

Operands operands(const AdditiveScenario& s, const Tolerance& tol) {
  require_pair(s.a, s.b);
  return {group_inverse(s.a, tol), group_inverse(s.b, tol)};
}

ComplexMatrix formula_T21(const ComplexMatrix& a, const ComplexMatrix& b,
                          const Operands& o, Complex lambda) {
  const auto& as = o.ga.ginv;
  const auto& bs = o.gb.ginv;
  if (is_minus_one(lambda)) {
    const auto s = as + bs;
    return (a + b) * s * s;
  }
  const Complex inv = 1.0 / (1.0 + lambda);
  return inv * (as + bs - as * o.gb.group_projector) +
         (lambda * inv) *
             (o.gb.spectral_projector * as + o.ga.spectral_projector * bs);
}

ComplexMatrix formula_C22(const ComplexMatrix& a, const ComplexMatrix& b,
                          const Operands& o, Complex lambda) {
  const auto& as = o.ga.ginv;
  const auto& bs = o.gb.ginv;
  if (is_minus_one(lambda)) {
    const auto s = as + bs;
    return s * s * (a + b);
  }
  const Complex inv = 1.0 / (1.0 + lambda);
  return inv * (as + bs - o.ga.group_projector * bs) +
         (lambda * inv) *
             (as * o.gb.spectral_projector + bs * o.ga.spectral_projector);
}

ComplexMatrix formula_C23(const ComplexMatrix& a, const ComplexMatrix& b,
                          Complex lambda) {
  const auto sum = a + b;
  if (is_minus_one(lambda)) return sum * sum * sum;
  return sum - ((2.0 + lambda) / (1.0 + lambda)) * (a * b);
}

ComplexMatrix formula_T24(const ComplexMatrix& a, const Operands& o,
                          Complex lambda) {
  const auto& as = o.ga.ginv;
  const auto& bs = o.gb.ginv;
  const auto& bpi = o.gb.spectral_projector;
  const Complex inv = 1.0 / (1.0 + lambda);
  return inv * bs + bpi * as * bpi +
         (lambda * inv * inv) * (bs * o.ga.group_projector * bpi) -
         inv * (bs * a * bpi * as * bpi);
}

ComplexMatrix formula_C25(const ComplexMatrix& b, const Operands& o,
                          Complex lambda) {
  const auto& as = o.ga.ginv;
  const auto& bs = o.gb.ginv;
  const auto& api = o.ga.spectral_projector;
  const Complex inv = 1.0 / (1.0 + lambda);
  return inv * as + api * bs * api +
         (lambda * inv * inv) * (api * o.gb.group_projector * as) -
         inv * (api * bs * api * b * as);
}

std::vector<NamedResidual> residuals_with(const AdditiveScenario& s,
                                          const Operands& o) {
  const auto& a = s.a;
  const auto& b = s.b;
  const Complex l = s.lambda;
  switch (s.theorem) {
    case AdditiveTheorem::T2_1:
      return {{"a*b*b# - lambda*b*a*a#",
               normalized_residual(a * o.gb.group_projector - l * (b * o.ga.group_projector),
                          pair_scale(a, b))}};
    case AdditiveTheorem::C2_2:
      return {{"a*a#*b - lambda*b*b#*a",
               normalized_residual(o.ga.group_projector * b - l * (o.gb.group_projector * a),
                          pair_scale(a, b))}};
    case AdditiveTheorem::C2_3:
      break;
    case AdditiveTheorem::T2_4:
      return {{"a*b*b# - lambda*b",
               normalized_residual(a * o.gb.group_projector - l * b, pair_scale(a, b))}};
    case AdditiveTheorem::C2_5:
      return {{"a*a#*b - lambda*a",
               normalized_residual(o.ga.group_projector * b - l * a, pair_scale(a, b))}};
  }
  return {};
}

std::vector<NamedResidual> idempotent_residuals(const AdditiveScenario& s) {
  const auto& a = s.a;
  const auto& b = s.b;
  return {{"a*a - a", normalized_residual(a * a - a, frobenius_norm(a))},
          {"b*b - b", normalized_residual(b * b - b, frobenius_norm(b))},
          {"a*b - lambda*b*a",
           normalized_residual(a * b - s.lambda * (b * a), pair_scale(a, b))}};
}

void require_hypotheses(const std::vector<NamedResidual>& residuals,
                        const Tolerance& tol) {
  for (const auto& r : residuals) {
    if (!(r.value <= tol.residual)) {
      throw Error(ErrorCode::HypothesisViolated,
                  "hypothesis " + r.name + " fails with relative residual " +
                      std::to_string(r.value),
                  {{r.name, r.value}});
    }
  }
}

FormulaOutput finish(const AdditiveScenario& s, ComplexMatrix candidate,
                     std::vector<NamedResidual> residuals, const Tolerance& tol) {
  FormulaOutput out;
  out.branch = branch_for(s.theorem, s.lambda);
  const double gap = std::abs(s.lambda + 1.0);
  out.near_branch = gap > kBranchTolerance && gap < kNearBranchBand;
  out.hypothesis_residuals = std::move(residuals);
  const auto sum = s.a + s.b;
  out.axioms = verify_group_axioms(sum, candidate, tol);
  try {
    out.oracle_distance = relative_error(candidate, group_inverse(sum, tol).ginv);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotGroupInvertible &&
        e.code() != ErrorCode::IllConditionedCore) {
      throw;
    }
  }
  out.candidate = std::move(candidate);
  return out;
}

FormulaOutput checked(const AdditiveScenario& s, AdditiveTheorem expected,
                      const Tolerance& tol) {
  AdditiveScenario local = s;
  local.theorem = expected;
  require_supported_lambda(expected, local.lambda);
  require_pair(local.a, local.b);
  if (expected == AdditiveTheorem::C2_3) {
    auto res = idempotent_residuals(local);
    for (std::size_t i = 0; i < 2; ++i) {
      if (!(res[i].value <= tol.residual)) {
        throw Error(ErrorCode::NotIdempotent,
                    "operand is not idempotent: " + res[i].name + " = " +
                        std::to_string(res[i].value),
                    {{res[i].name, res[i].value}});
      }
    }
    require_hypotheses(res, tol);
    return finish(local, formula_C23(local.a, local.b, local.lambda),
                  std::move(res), tol);
  }
  const auto o = operands(local, tol);
  auto res = residuals_with(local, o);
  require_hypotheses(res, tol);
  ComplexMatrix candidate;
  switch (expected) {
    case AdditiveTheorem::T2_1:
      candidate = formula_T21(local.a, local.b, o, local.lambda);
      break;
    case AdditiveTheorem::C2_2:
      candidate = formula_C22(local.a, local.b, o, local.lambda);
      break;
    case AdditiveTheorem::T2_4:
      candidate = formula_T24(local.a, o, local.lambda);
      break;
    case AdditiveTheorem::C2_5:
      candidate = formula_C25(local.b, o, local.lambda);
      break;
    case AdditiveTheorem::C2_3:
      break;
  }
  return finish(local, std::move(candidate), std::move(res), tol);
}

}  // namespace

std::string_view to_string(AdditiveTheorem t) {
  switch (t) {
    case AdditiveTheorem::T2_1: return "T2.1";
    case AdditiveTheorem::C2_2: return "C2.2";
    case AdditiveTheorem::C2_3: return "C2.3";
    case AdditiveTheorem::T2_4: return "T2.4";
    case AdditiveTheorem::C2_5: return "C2.5";
  }
  return "?";
}

std::optional<AdditiveTheorem> parse_additive_theorem(std::string_view tag) {
  for (auto t : {AdditiveTheorem::T2_1, AdditiveTheorem::C2_2,
                 AdditiveTheorem::C2_3, AdditiveTheorem::T2_4,
                 AdditiveTheorem::C2_5}) {
    if (to_string(t) == tag) return t;
  }
  return std::nullopt;
}

std::string_view to_string(Branch b) {
  return b == Branch::LambdaMinusOne ? "LambdaMinusOne" : "Generic";
}

bool is_minus_one(Complex lambda) {
  return std::abs(lambda + 1.0) <= kBranchTolerance;
}

bool is_zero(Complex lambda) { return std::abs(lambda) <= kBranchTolerance; }

void require_supported_lambda(AdditiveTheorem t, Complex lambda) {
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag())) {
    throw Error(ErrorCode::NonFinite, "lambda must be finite");
  }
  switch (t) {
    case AdditiveTheorem::T2_1:
    case AdditiveTheorem::C2_2:
    case AdditiveTheorem::C2_3:
      if (is_zero(lambda)) {
        throw Error(ErrorCode::UnsupportedLambda,
                    std::string(to_string(t)) +
                        ": lambda = 0 is not covered; the hypothesis no longer "
                        "forces the (2,1) Peirce block of b to vanish. "
                        "Counterexample: a = [[0,1],[0,1]], b = [[1,0],[0,0]] "
                        "satisfies a*b*b# = 0 but the formula gives [[1,1],[0,1]] "
                        "while (a+b)# = [[1,-1],[0,1]]");
      }
      break;
    case AdditiveTheorem::T2_4:
    case AdditiveTheorem::C2_5:
      if (is_minus_one(lambda)) {
        throw Error(ErrorCode::LambdaIsMinusOne,
                    std::string(to_string(t)) + ": lambda = " +
                        format_lambda(lambda) + " is excluded");
      }
      break;
  }
}

Branch branch_for(AdditiveTheorem t, Complex lambda) {
  const bool split = t == AdditiveTheorem::T2_1 || t == AdditiveTheorem::C2_2 ||
                     t == AdditiveTheorem::C2_3;
  return split && is_minus_one(lambda) ? Branch::LambdaMinusOne
                                       : Branch::Generic;
}

double residual_T21(const ComplexMatrix& a, const ComplexMatrix& b,
                    Complex lambda, const Tolerance& tol) {
  AdditiveScenario s{AdditiveTheorem::T2_1, lambda, a, b};
  return residuals_with(s, operands(s, tol)).front().value;
}

double residual_C22(const ComplexMatrix& a, const ComplexMatrix& b,
                    Complex lambda, const Tolerance& tol) {
  AdditiveScenario s{AdditiveTheorem::C2_2, lambda, a, b};
  return residuals_with(s, operands(s, tol)).front().value;
}

double residual_T24(const ComplexMatrix& a, const ComplexMatrix& b,
                    Complex lambda, const Tolerance& tol) {
  AdditiveScenario s{AdditiveTheorem::T2_4, lambda, a, b};
  return residuals_with(s, operands(s, tol)).front().value;
}

double residual_C25(const ComplexMatrix& a, const ComplexMatrix& b,
                    Complex lambda, const Tolerance& tol) {
  AdditiveScenario s{AdditiveTheorem::C2_5, lambda, a, b};
  return residuals_with(s, operands(s, tol)).front().value;
}

std::vector<NamedResidual> hypothesis_residuals(const AdditiveScenario& s,
                                                const Tolerance& tol) {
  if (s.theorem == AdditiveTheorem::C2_3) {
    require_pair(s.a, s.b);
    return idempotent_residuals(s);
  }
  return residuals_with(s, operands(s, tol));
}

ComplexMatrix evaluate_formula(const AdditiveScenario& s, const Tolerance& tol) {
  if (s.theorem == AdditiveTheorem::C2_3) {
    require_pair(s.a, s.b);
    return formula_C23(s.a, s.b, s.lambda);
  }
  const auto o = operands(s, tol);
  switch (s.theorem) {
    case AdditiveTheorem::T2_1: return formula_T21(s.a, s.b, o, s.lambda);
    case AdditiveTheorem::C2_2: return formula_C22(s.a, s.b, o, s.lambda);
    case AdditiveTheorem::T2_4: return formula_T24(s.a, o, s.lambda);
    case AdditiveTheorem::C2_5: return formula_C25(s.b, o, s.lambda);
    case AdditiveTheorem::C2_3: break;
  }
  return {};
}

FormulaOutput sum_ginv_T21(const AdditiveScenario& s, const Tolerance& tol) {
  return checked(s, AdditiveTheorem::T2_1, tol);
}

FormulaOutput sum_ginv_C22(const AdditiveScenario& s, const Tolerance& tol) {
  return checked(s, AdditiveTheorem::C2_2, tol);
}

FormulaOutput idempotent_sum_C23(const AdditiveScenario& s,
                                 const Tolerance& tol) {
  return checked(s, AdditiveTheorem::C2_3, tol);
}

FormulaOutput sum_ginv_T24(const AdditiveScenario& s, const Tolerance& tol) {
  return checked(s, AdditiveTheorem::T2_4, tol);
}

FormulaOutput sum_ginv_C25(const AdditiveScenario& s, const Tolerance& tol) {
  return checked(s, AdditiveTheorem::C2_5, tol);
}

FormulaOutput sum_ginv(const AdditiveScenario& s, const Tolerance& tol) {
  return checked(s, s.theorem, tol);
}

AdditiveScenario dual(const AdditiveScenario& s) {
  AdditiveScenario d{s.theorem, s.lambda, transpose(s.b), transpose(s.a)};
  switch (s.theorem) {
    case AdditiveTheorem::T2_1: d.theorem = AdditiveTheorem::C2_2; break;
    case AdditiveTheorem::C2_2: d.theorem = AdditiveTheorem::T2_1; break;
    case AdditiveTheorem::C2_3: break;
    case AdditiveTheorem::T2_4: d.theorem = AdditiveTheorem::C2_5; break;
    case AdditiveTheorem::C2_5: d.theorem = AdditiveTheorem::T2_4; break;
  }
  return d;
}

}  // namespace grpinv
