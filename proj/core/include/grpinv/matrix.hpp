#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace grpinv {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using DenseMatrix = Eigen::MatrixXcd;

// Dense complex matrix value type. Entries are checked for finiteness on
// construction and never mutated afterwards; every operation returns a new
// matrix. Zero-sized matrices are permitted so that empty Peirce blocks
// compose without special cases.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(Index rows, Index cols);
  explicit ComplexMatrix(DenseMatrix values);

  // Row-major construction; `entries.size()` must equal rows * cols.
  ComplexMatrix(Index rows, Index cols, std::span<const Complex> entries);

  static ComplexMatrix from_rows(
      std::initializer_list<std::initializer_list<Complex>> rows);
  static ComplexMatrix identity(Index n);
  static ComplexMatrix zero(Index rows, Index cols);
  static ComplexMatrix diagonal(std::span<const Complex> diag);
  static ComplexMatrix diagonal(std::initializer_list<Complex> diag);

  Index rows() const noexcept { return values_.rows(); }
  Index cols() const noexcept { return values_.cols(); }
  bool is_square() const noexcept { return rows() == cols(); }
  bool empty() const noexcept { return values_.size() == 0; }

  Complex operator()(Index i, Index j) const { return values_(i, j); }
  const DenseMatrix& eigen() const noexcept { return values_; }

  // Row-major copy of the entries.
  std::vector<Complex> entries() const;

  ComplexMatrix block(Index row, Index col, Index rows, Index cols) const;

 private:
  DenseMatrix values_;
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix sub(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(Complex s, const ComplexMatrix& a);
ComplexMatrix transpose(const ComplexMatrix& a);
ComplexMatrix conj_transpose(const ComplexMatrix& a);

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  return matmul(a, b);
}
inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  return add(a, b);
}
inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  return sub(a, b);
}
inline ComplexMatrix operator-(const ComplexMatrix& a) { return scale(-1.0, a); }
inline ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
  return scale(s, a);
}

double frobenius_norm(const ComplexMatrix& a);
double max_abs(const ComplexMatrix& a);
bool same_shape(const ComplexMatrix& a, const ComplexMatrix& b);

// ‖a - b‖_F / max(1, ‖b‖_F)
double relative_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// ‖defect‖_F / max(1, scale). Hypothesis residuals pass the product of the
// Frobenius norms of the factors involved as `scale`.
double normalized_residual(const ComplexMatrix& defect, double scale);

// ‖a - ref‖_F / ‖ref‖_F, or ‖a‖_F when ref is zero.
double relative_error(const ComplexMatrix& a, const ComplexMatrix& ref);

// max_ij |a_ij - b_ij| / max(1, max_ij |b_ij|)
double entrywise_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// [[tl, tr], [bl, br]]
ComplexMatrix assemble_2x2(const ComplexMatrix& tl, const ComplexMatrix& tr,
                           const ComplexMatrix& bl, const ComplexMatrix& br);
ComplexMatrix block_diagonal(std::span<const ComplexMatrix> blocks);
ComplexMatrix block_diagonal(std::initializer_list<ComplexMatrix> blocks);

// Removes row `i` and column `j`.
ComplexMatrix delete_row_col(const ComplexMatrix& a, Index i, Index j);

}  // namespace grpinv
