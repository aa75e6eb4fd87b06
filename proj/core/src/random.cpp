#include "grpinv/random.hpp"

#include <cmath>
#include <string>

#include <Eigen/QR>

#include "grpinv/error.hpp"

namespace grpinv {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ComplexMatrix random_general(Index rows, Index cols, Engine& engine) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  DenseMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const double re = normal(engine);
      const double im = normal(engine);
      m(i, j) = Complex(re, im);
    }
  }
  return ComplexMatrix(std::move(m));
}

ComplexMatrix random_general(Index rows, Index cols, std::uint64_t seed) {
  Engine engine(seed);
  return random_general(rows, cols, engine);
}

ComplexMatrix random_unitary(Index n, std::uint64_t seed) {
  if (n < 1) {
    throw Error(ErrorCode::DimensionMismatch, "random_unitary: n must be >= 1");
  }
  const auto g = random_general(n, n, seed);
  Eigen::HouseholderQR<DenseMatrix> qr(g.eigen());
  DenseMatrix q = qr.householderQ();
  const DenseMatrix& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    const Complex phase = mag > 0.0 ? r(j, j) / mag : Complex(1.0);
    q.col(j) *= phase;
  }
  return ComplexMatrix(std::move(q));
}

ComplexMatrix random_invertible(Index n, double cond_bound, std::uint64_t seed) {
  if (n < 1 || !(cond_bound > 1.0)) {
    throw Error(ErrorCode::ConditionViolated,
                "random_invertible: need n >= 1 and cond_bound > 1, got n=" +
                    std::to_string(n) + " cond_bound=" +
                    std::to_string(cond_bound));
  }
  Engine engine(derive_seed(seed, 0));
  std::uniform_real_distribution<double> exponent(0.0, 0.999);
  Eigen::VectorXcd sigma(n);
  sigma(0) = 1.0;
  for (Index i = 1; i < n; ++i) {
    sigma(i) = std::pow(cond_bound, -exponent(engine));
  }
  const auto u = random_unitary(n, derive_seed(seed, 1));
  const auto v = random_unitary(n, derive_seed(seed, 2));
  return ComplexMatrix(
      DenseMatrix(u.eigen() * sigma.asDiagonal() * v.eigen().adjoint()));
}

}  // namespace grpinv
