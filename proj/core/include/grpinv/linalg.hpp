#pragma once

#include <optional>
#include <vector>

#include "grpinv/matrix.hpp"

namespace grpinv {

struct SvdResult {
  ComplexMatrix u;             // rows x rows, unitary
  std::vector<double> sigma;   // min(rows, cols), non-increasing
  ComplexMatrix v;             // cols x cols, unitary; a = u * diag(sigma) * v^*
};

struct Tolerance {
  // Singular values at or below rank_factor * sigma_max count as zero.
  // Unset selects max(rows, cols) * machine epsilon.
  std::optional<double> rank_factor;
  // Relative Frobenius residual used for every verification decision.
  double residual = 1e-8;
  // group_inverse refuses cores whose condition estimate exceeds this.
  double max_core_condition = 1e12;

  double rank_factor_for(Index rows, Index cols) const;
  double rank_cutoff(const std::vector<double>& sigma, Index rows,
                     Index cols) const;
  // Throws ConditionViolated unless all fields are strictly positive.
  void validate() const;
};

SvdResult svd(const ComplexMatrix& a);

int rank_with_tol(const ComplexMatrix& a, const Tolerance& tol = {});
int rank_from_svd(const SvdResult& s, Index rows, Index cols,
                  const Tolerance& tol = {});

// sigma_max / sigma_min; +inf when singular, 1 for empty matrices.
double condition_number(const ComplexMatrix& a);

// Inverse of a numerically nonsingular square matrix. Throws Singular when
// the smallest singular value falls under the rank cutoff.
ComplexMatrix invert(const ComplexMatrix& a, const Tolerance& tol = {});

// Solves a * x = b for square nonsingular a.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b,
                    const Tolerance& tol = {});

}  // namespace grpinv
