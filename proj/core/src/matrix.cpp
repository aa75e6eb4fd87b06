#include "grpinv/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "grpinv/error.hpp"

namespace grpinv {

namespace {

void require_finite(const DenseMatrix& m) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::NonFinite, "matrix contains NaN or Inf entries");
  }
}

std::string shape(const ComplexMatrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b,
                        const char* op) {
  if (!same_shape(a, b)) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(op) + ": " + shape(a) + " vs " + shape(b));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(Index rows, Index cols)
    : values_(DenseMatrix::Zero(rows, cols)) {}

ComplexMatrix::ComplexMatrix(DenseMatrix values) : values_(std::move(values)) {
  require_finite(values_);
}

ComplexMatrix::ComplexMatrix(Index rows, Index cols,
                             std::span<const Complex> entries) {
  if (rows < 0 || cols < 0 ||
      static_cast<std::size_t>(rows * cols) != entries.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "entry count " + std::to_string(entries.size()) +
                    " does not match " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  }
  values_.resize(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      values_(i, j) = entries[static_cast<std::size_t>(i * cols + j)];
    }
  }
  require_finite(values_);
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto nrows = static_cast<Index>(rows.size());
  const auto ncols = nrows == 0 ? Index{0}
                                : static_cast<Index>(rows.begin()->size());
  std::vector<Complex> flat;
  flat.reserve(static_cast<std::size_t>(nrows * ncols));
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != ncols) {
      throw Error(ErrorCode::DimensionMismatch, "ragged row list");
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return ComplexMatrix(nrows, ncols, flat);
}

ComplexMatrix ComplexMatrix::identity(Index n) {
  return ComplexMatrix(DenseMatrix::Identity(n, n));
}

ComplexMatrix ComplexMatrix::zero(Index rows, Index cols) {
  return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  const auto n = static_cast<Index>(diag.size());
  DenseMatrix m = DenseMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
  return ComplexMatrix(std::move(m));
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<Complex> diag) {
  return diagonal(std::span<const Complex>(diag.begin(), diag.size()));
}

std::vector<Complex> ComplexMatrix::entries() const {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(values_.size()));
  for (Index i = 0; i < rows(); ++i) {
    for (Index j = 0; j < cols(); ++j) out.push_back(values_(i, j));
  }
  return out;
}

ComplexMatrix ComplexMatrix::block(Index row, Index col, Index nrows,
                                   Index ncols) const {
  if (row < 0 || col < 0 || nrows < 0 || ncols < 0 || row + nrows > rows() ||
      col + ncols > cols()) {
    throw Error(ErrorCode::DimensionMismatch, "block out of range of " +
                                                  shape(*this));
  }
  return ComplexMatrix(DenseMatrix(values_.block(row, col, nrows, ncols)));
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "matmul: " + shape(a) + " * " + shape(b));
  }
  return ComplexMatrix(DenseMatrix(a.eigen() * b.eigen()));
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "add");
  return ComplexMatrix(DenseMatrix(a.eigen() + b.eigen()));
}

ComplexMatrix sub(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "sub");
  return ComplexMatrix(DenseMatrix(a.eigen() - b.eigen()));
}

ComplexMatrix scale(Complex s, const ComplexMatrix& a) {
  return ComplexMatrix(DenseMatrix(s * a.eigen()));
}

ComplexMatrix transpose(const ComplexMatrix& a) {
  return ComplexMatrix(DenseMatrix(a.eigen().transpose()));
}

ComplexMatrix conj_transpose(const ComplexMatrix& a) {
  return ComplexMatrix(DenseMatrix(a.eigen().adjoint()));
}

double frobenius_norm(const ComplexMatrix& a) { return a.eigen().norm(); }

double max_abs(const ComplexMatrix& a) {
  return a.empty() ? 0.0 : a.eigen().cwiseAbs().maxCoeff();
}

bool same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols();
}

double relative_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "relative_distance");
  return (a.eigen() - b.eigen()).norm() / std::max(1.0, b.eigen().norm());
}

double normalized_residual(const ComplexMatrix& defect, double scale) {
  return frobenius_norm(defect) / std::max(1.0, scale);
}

double relative_error(const ComplexMatrix& a, const ComplexMatrix& ref) {
  require_same_shape(a, ref, "relative_error");
  const double diff = (a.eigen() - ref.eigen()).norm();
  const double base = ref.eigen().norm();
  return base == 0.0 ? diff : diff / base;
}

double entrywise_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "entrywise_distance");
  if (a.empty()) return 0.0;
  return (a.eigen() - b.eigen()).cwiseAbs().maxCoeff() /
         std::max(1.0, max_abs(b));
}

ComplexMatrix assemble_2x2(const ComplexMatrix& tl, const ComplexMatrix& tr,
                           const ComplexMatrix& bl, const ComplexMatrix& br) {
  if (tl.rows() != tr.rows() || bl.rows() != br.rows() ||
      tl.cols() != bl.cols() || tr.cols() != br.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "assemble_2x2: blocks " + shape(tl) + ", " + shape(tr) + ", " +
                    shape(bl) + ", " + shape(br) + " do not tile");
  }
  DenseMatrix m(tl.rows() + bl.rows(), tl.cols() + tr.cols());
  m << tl.eigen(), tr.eigen(), bl.eigen(), br.eigen();
  return ComplexMatrix(std::move(m));
}

ComplexMatrix block_diagonal(std::span<const ComplexMatrix> blocks) {
  Index rows = 0;
  Index cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  DenseMatrix m = DenseMatrix::Zero(rows, cols);
  Index r = 0;
  Index c = 0;
  for (const auto& b : blocks) {
    m.block(r, c, b.rows(), b.cols()) = b.eigen();
    r += b.rows();
    c += b.cols();
  }
  return ComplexMatrix(std::move(m));
}

ComplexMatrix block_diagonal(std::initializer_list<ComplexMatrix> blocks) {
  return block_diagonal(std::span<const ComplexMatrix>(blocks.begin(),
                                                       blocks.size()));
}

ComplexMatrix delete_row_col(const ComplexMatrix& a, Index i, Index j) {
  if (i < 0 || i >= a.rows() || j < 0 || j >= a.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "delete_row_col out of range");
  }
  DenseMatrix m(a.rows() - 1, a.cols() - 1);
  for (Index r = 0, rr = 0; r < a.rows(); ++r) {
    if (r == i) continue;
    for (Index c = 0, cc = 0; c < a.cols(); ++c) {
      if (c == j) continue;
      m(rr, cc++) = a(r, c);
    }
    ++rr;
  }
  return ComplexMatrix(std::move(m));
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NotGroupInvertible: return "NotGroupInvertible";
    case ErrorCode::IllConditionedCore: return "IllConditionedCore";
    case ErrorCode::ConditionViolated: return "ConditionViolated";
    case ErrorCode::UnsupportedLambda: return "UnsupportedLambda";
    case ErrorCode::LambdaIsMinusOne: return "LambdaIsMinusOne";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::NotIdempotent: return "NotIdempotent";
    case ErrorCode::RankPatternViolated: return "RankPatternViolated";
    case ErrorCode::UnsupportedMode: return "UnsupportedMode";
    case ErrorCode::UnknownTheorem: return "UnknownTheorem";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace grpinv
