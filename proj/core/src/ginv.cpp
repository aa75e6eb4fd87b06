#include "grpinv/ginv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>
#include <boost/multiprecision/cpp_complex.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "grpinv/error.hpp"

namespace grpinv {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

using Quad = boost::multiprecision::cpp_complex_quad;
using QuadMatrix = Eigen::Matrix<Quad, Eigen::Dynamic, Eigen::Dynamic>;

void require_square(const ComplexMatrix& a, const char* op) {
  if (!a.is_square()) {
    throw Error(ErrorCode::NonSquare, std::string(op) + ": matrix is " +
                                          std::to_string(a.rows()) + "x" +
                                          std::to_string(a.cols()));
  }
}

bool near_cutoff(const std::vector<double>& sigma, double cutoff) {
  if (cutoff <= 0.0) return false;
  return std::any_of(sigma.begin(), sigma.end(), [&](double s) {
    return s >= cutoff / 10.0 && s <= cutoff * 10.0;
  });
}

struct Factorization {
  DenseMatrix f;  // U_r Sigma_r
  DenseMatrix g;  // V_r^*
  ComplexMatrix core;  // G F
  GroupInvertibility info;
};

// rank(a^2) = rank(F (G F) G) = rank(G F) since F has full column rank and G
// full row rank. Reading it off the r x r core avoids the roundoff of forming
// a * a, which is on the scale of ‖a‖^2 rather than ‖a^2‖.
Factorization factorize(const ComplexMatrix& a, const Tolerance& tol) {
  require_square(a, "group inverse");
  const auto n = a.rows();
  const auto s = svd(a);
  Factorization out;
  const int r = rank_from_svd(s, n, n, tol);
  Eigen::VectorXcd sigma_r(r);
  for (int i = 0; i < r; ++i) sigma_r(i) = s.sigma[static_cast<std::size_t>(i)];
  out.f = s.u.eigen().leftCols(r) * sigma_r.asDiagonal();
  out.g = s.v.eigen().leftCols(r).adjoint();
  out.core = ComplexMatrix(DenseMatrix(out.g * out.f));
  const auto sc = svd(out.core);

  out.info.rank = r;
  out.info.rank_square = rank_from_svd(sc, r, r, tol);
  out.info.invertible = out.info.rank == out.info.rank_square;
  out.info.marginal = near_cutoff(s.sigma, tol.rank_cutoff(s.sigma, n, n)) ||
                      near_cutoff(sc.sigma, tol.rank_cutoff(sc.sigma, r, r));
  return out;
}

// Pseudoinverse from an SVD keeping the leading `keep` singular triplets.
ComplexMatrix truncated_pinv(const SvdResult& s, Index rows, Index cols,
                             int keep) {
  DenseMatrix out = DenseMatrix::Zero(cols, rows);
  for (int i = 0; i < keep; ++i) {
    out += (s.v.eigen().col(i) / s.sigma[static_cast<std::size_t>(i)]) *
           s.u.eigen().col(i).adjoint();
  }
  return ComplexMatrix(std::move(out));
}

}  // namespace

GroupInvertibility is_group_invertible(const ComplexMatrix& a,
                                       const Tolerance& tol) {
  return factorize(a, tol).info;
}

GroupInverseResult group_inverse(const ComplexMatrix& a, const Tolerance& tol) {
  const auto fact = factorize(a, tol);
  const auto& info = fact.info;
  const auto n = a.rows();
  if (!info.invertible) {
    throw Error(ErrorCode::NotGroupInvertible,
                "rank(a) = " + std::to_string(info.rank) + " but rank(a^2) = " +
                    std::to_string(info.rank_square) +
                    (info.marginal ? " (marginal rank decision)" : ""),
                {{"rank", info.rank},
                 {"rank_square", info.rank_square},
                 {"marginal", info.marginal ? 1.0 : 0.0}});
  }

  GroupInverseResult out;
  out.rank = info.rank;
  out.rank_square = info.rank_square;
  out.marginal = info.marginal;

  if (info.rank == 0) {
    out.ginv = ComplexMatrix::zero(n, n);
  } else {
    out.core_condition = condition_number(fact.core);
    if (!(out.core_condition <= tol.max_core_condition)) {
      throw Error(ErrorCode::IllConditionedCore,
                  "core condition " + std::to_string(out.core_condition) +
                      " exceeds bound " + std::to_string(tol.max_core_condition),
                  {{"core_condition", out.core_condition},
                   {"rank", info.rank}});
    }
    Tolerance core_tol = tol;
    core_tol.rank_factor = 1.0 / tol.max_core_condition;
    const DenseMatrix core_inv = invert(fact.core, core_tol).eigen();
    out.ginv = ComplexMatrix(DenseMatrix(fact.f * core_inv * core_inv * fact.g));
  }
  out.group_projector = a * out.ginv;
  out.spectral_projector = ComplexMatrix::identity(n) - out.group_projector;
  return out;
}

ComplexMatrix group_inverse_cline(const ComplexMatrix& a, const Tolerance& tol) {
  const auto info = is_group_invertible(a, tol);
  if (!info.invertible) {
    throw Error(ErrorCode::NotGroupInvertible,
                "rank(a) = " + std::to_string(info.rank) + " but rank(a^2) = " +
                    std::to_string(info.rank_square),
                {{"rank", info.rank}, {"rank_square", info.rank_square}});
  }
  const Index n = a.rows();
  const Index r = info.rank;
  if (r == 0) return ComplexMatrix::zero(n, n);
  QuadMatrix q(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) q(i, j) = Quad(a(i, j).real(), a(i, j).imag());
  }
  const QuadMatrix cube = q * q * q;
  const Eigen::JacobiSVD<QuadMatrix> s(cube, Eigen::ComputeThinU | Eigen::ComputeThinV);
  QuadMatrix v = s.matrixV().leftCols(r);
  for (Index k = 0; k < r; ++k) v.col(k) /= Quad(s.singularValues()(k));
  const QuadMatrix x = q * v * s.matrixU().leftCols(r).adjoint() * q;
  DenseMatrix out(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      out(i, j) = Complex(static_cast<double>(x(i, j).real()),
                          static_cast<double>(x(i, j).imag()));
    }
  }
  return ComplexMatrix(std::move(out));
}

ComplexMatrix moore_penrose(const ComplexMatrix& a, const Tolerance& tol) {
  const auto s = svd(a);
  return truncated_pinv(s, a.rows(), a.cols(),
                        rank_from_svd(s, a.rows(), a.cols(), tol));
}

ComplexMatrix spectral_projector(const GroupInverseResult& r) {
  return ComplexMatrix::identity(r.group_projector.rows()) - r.group_projector;
}

ComplexMatrix triangular_block_ginv(const ComplexMatrix& x,
                                    const ComplexMatrix& y,
                                    const ComplexMatrix& w,
                                    const Tolerance& tol) {
  if (y.rows() != x.rows() || y.cols() != w.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "triangular_block_ginv: off-diagonal block does not fit");
  }
  const auto gx = group_inverse(x, tol);
  const auto gw = group_inverse(w, tol);
  const auto& xs = gx.ginv;
  const auto& ws = gw.ginv;
  const auto& xpi = gx.spectral_projector;
  const auto& wpi = gw.spectral_projector;

  const double scale = std::max(
      1.0, frobenius_norm(xpi) * frobenius_norm(y) * frobenius_norm(wpi));
  const double defect = frobenius_norm(xpi * y * wpi) / scale;
  if (!(defect <= tol.residual)) {
    throw Error(ErrorCode::ConditionViolated,
                "x^pi y w^pi = 0 fails with relative residual " +
                    std::to_string(defect),
                {{"residual", defect}});
  }
  const auto z = xs * xs * y * wpi + xpi * y * ws * ws - xs * y * ws;
  return assemble_2x2(xs, z, ComplexMatrix::zero(w.rows(), x.cols()), ws);
}

AxiomReport verify_group_axioms(const ComplexMatrix& a, const ComplexMatrix& x,
                                const Tolerance& tol) {
  require_square(a, "verify_group_axioms");
  if (!same_shape(a, x)) {
    throw Error(ErrorCode::DimensionMismatch,
                "verify_group_axioms: candidate shape differs from matrix");
  }
  const double na = frobenius_norm(a);
  const double nx = frobenius_norm(x);
  AxiomReport r;
  r.tolerance = tol.residual;
  r.axa = frobenius_norm(a * x * a - a) / std::max(na, kEps);
  r.xax = frobenius_norm(x * a * x - x) / std::max(nx, kEps);
  r.commute = frobenius_norm(a * x - x * a) / std::max(na * nx, kEps);
  r.pass = r.axa <= tol.residual && r.xax <= tol.residual &&
           r.commute <= tol.residual;
  return r;
}

}  // namespace grpinv
