#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "grpinv/linalg.hpp"
#include "grpinv/random.hpp"
#include "oracles.hpp"

using namespace grpinv;

TEST(Random, DeterministicPerSeed) {
  EXPECT_MATRIX_NEAR(random_general(3, 4, 99), random_general(3, 4, 99), 0.0);
  EXPECT_MATRIX_NEAR(random_invertible(5, 10.0, 7), random_invertible(5, 10.0, 7), 0.0);
  EXPECT_GT(oracle::max_diff(random_general(3, 3, 1), random_general(3, 3, 2)), 0.0);
}

TEST(Random, GeneralEntriesFinite) {
  for (const auto& z : random_general(2, 2, 5).entries()) {
    EXPECT_TRUE(std::isfinite(z.real()) && std::isfinite(z.imag()));
  }
}

TEST(Random, UnitaryIsUnitary) {
  const auto q = random_unitary(6, 3);
  EXPECT_LE(frobenius_norm(conj_transpose(q) * q - ComplexMatrix::identity(6)), 1e-13);
}

TEST(Random, ConditionBoundHolds) {
  for (double bound : {1.5, 10.0, 1e3, 1e6}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      for (Index n : {1, 2, 7, 16}) {
        const auto s = svd(random_invertible(n, bound, seed));
        EXPECT_LE(s.sigma.front() / s.sigma.back(), bound * (1 + 1e-10));
      }
    }
  }
}

TEST(Random, DerivedSeedsSeparateStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t m = 0; m < 10; ++m) {
    for (std::uint64_t s = 0; s < 100; ++s) seen.insert(derive_seed(m, s));
  }
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(derive_seed(5, 6), derive_seed(5, 6));
}
