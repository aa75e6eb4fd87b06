#include "grpinv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "grpinv/error.hpp"

namespace grpinv {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string echo(const ComplexMatrix& a) {
  std::ostringstream os;
  os << a.rows() << "x" << a.cols();
  if (a.rows() * a.cols() <= 64) os << "\n" << a.eigen();
  return os.str();
}

}  // namespace

double Tolerance::rank_factor_for(Index rows, Index cols) const {
  if (rank_factor) return *rank_factor;
  return static_cast<double>(std::max<Index>({rows, cols, 1})) * kEps;
}

double Tolerance::rank_cutoff(const std::vector<double>& sigma, Index rows,
                              Index cols) const {
  const double top = sigma.empty() ? 0.0 : sigma.front();
  return rank_factor_for(rows, cols) * top;
}

void Tolerance::validate() const {
  const bool ok = (!rank_factor || *rank_factor > 0.0) && residual > 0.0 &&
                  max_core_condition > 0.0;
  if (!ok) {
    throw Error(ErrorCode::ConditionViolated,
                "tolerances must be strictly positive");
  }
}

SvdResult svd(const ComplexMatrix& a) {
  if (a.empty()) {
    return {ComplexMatrix::identity(a.rows()), {},
            ComplexMatrix::identity(a.cols())};
  }
  Eigen::JacobiSVD<DenseMatrix> solver(a.eigen(),
                                       Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = solver.singularValues();
  if (solver.info() != Eigen::Success || !s.allFinite() ||
      !solver.matrixU().allFinite() || !solver.matrixV().allFinite()) {
    throw Error(ErrorCode::NonConvergence, "svd failed for input " + echo(a));
  }
  return {ComplexMatrix(DenseMatrix(solver.matrixU())),
          std::vector<double>(s.data(), s.data() + s.size()),
          ComplexMatrix(DenseMatrix(solver.matrixV()))};
}

int rank_from_svd(const SvdResult& s, Index rows, Index cols,
                  const Tolerance& tol) {
  const double cutoff = tol.rank_cutoff(s.sigma, rows, cols);
  return static_cast<int>(std::count_if(s.sigma.begin(), s.sigma.end(),
                                        [&](double x) { return x > cutoff; }));
}

int rank_with_tol(const ComplexMatrix& a, const Tolerance& tol) {
  return rank_from_svd(svd(a), a.rows(), a.cols(), tol);
}

double condition_number(const ComplexMatrix& a) {
  if (a.empty()) return 1.0;
  const auto s = svd(a).sigma;
  if (s.back() == 0.0) return std::numeric_limits<double>::infinity();
  return s.front() / s.back();
}

ComplexMatrix invert(const ComplexMatrix& a, const Tolerance& tol) {
  if (!a.is_square()) {
    throw Error(ErrorCode::NonSquare, "invert: matrix is " +
                                          std::to_string(a.rows()) + "x" +
                                          std::to_string(a.cols()));
  }
  if (a.empty()) return a;
  const auto s = svd(a);
  const double cutoff = tol.rank_cutoff(s.sigma, a.rows(), a.cols());
  if (s.sigma.back() <= cutoff) {
    throw Error(ErrorCode::Singular, "invert: matrix is singular to tolerance",
                {{"sigma_min", s.sigma.back()}, {"cutoff", cutoff}});
  }
  Eigen::VectorXd inv_sigma(static_cast<Index>(s.sigma.size()));
  for (std::size_t i = 0; i < s.sigma.size(); ++i) {
    inv_sigma(static_cast<Index>(i)) = 1.0 / s.sigma[i];
  }
  return ComplexMatrix(DenseMatrix(
      s.v.eigen() * inv_sigma.cast<Complex>().asDiagonal() *
      s.u.eigen().adjoint()));
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b,
                    const Tolerance& tol) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "solve: row count mismatch");
  }
  return invert(a, tol) * b;
}

}  // namespace grpinv
