#include <gtest/gtest.h>

#include <array>

#include "grpinv/additive.hpp"
#include "grpinv/error.hpp"
#include "grpinv/gen.hpp"
#include "grpinv/ginv.hpp"
#include "grpinv/random.hpp"
#include "oracles.hpp"

using namespace grpinv;

namespace {

const auto kA = ComplexMatrix::from_rows({{-1.0, -1.0}, {1.0, -3.0}});
const auto kB = ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 1.0}});
const auto kNil = ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});

oracle::Planted planted(Index n, Index r, double cond, std::uint64_t seed) {
  const auto s = random_invertible(n, cond, derive_seed(seed, 1));
  if (r == 0) return oracle::plant(s.eigen(), DenseMatrix(0, 0));
  const auto core = random_invertible(r, cond, derive_seed(seed, 2));
  return oracle::plant(s.eigen(), core.eigen());
}

}  // namespace

TEST(IsGroupInvertible, Examples) {
  const auto b = is_group_invertible(kB);
  EXPECT_TRUE(b.invertible);
  EXPECT_EQ(b.rank, 1);
  EXPECT_EQ(b.rank_square, 1);
  const auto n = is_group_invertible(kNil);
  EXPECT_FALSE(n.invertible);
  EXPECT_EQ(n.rank, 1);
  EXPECT_EQ(n.rank_square, 0);
  EXPECT_TRUE(is_group_invertible(ComplexMatrix::identity(3)).invertible);
  EXPECT_THROW(is_group_invertible(ComplexMatrix(2, 3)), Error);
}

TEST(GroupInverse, WorkedExampleOperands) {
  EXPECT_MATRIX_NEAR(group_inverse(kA).ginv,
                     ComplexMatrix::from_rows({{-0.75, 0.25}, {-0.25, -0.25}}), 1e-15);
  EXPECT_MATRIX_NEAR(group_inverse(kB).ginv, kB, 1e-15);
}

TEST(GroupInverse, DiagonalWithZero) {
  const auto r = group_inverse(ComplexMatrix::diagonal({2.0, 0.0}));
  EXPECT_MATRIX_NEAR(r.ginv, ComplexMatrix::diagonal({0.5, 0.0}), 1e-15);
  EXPECT_EQ(r.rank, 1);
  EXPECT_MATRIX_NEAR(r.spectral_projector, ComplexMatrix::diagonal({0.0, 1.0}), 1e-15);
}

TEST(GroupInverse, NilpotentReportsBothRanks) {
  try {
    group_inverse(kNil);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotGroupInvertible);
    EXPECT_EQ(e.details().at("rank"), 1.0);
    EXPECT_EQ(e.details().at("rank_square"), 0.0);
  }
}

TEST(GroupInverse, ZeroMatrix) {
  const auto r = group_inverse(ComplexMatrix::zero(3, 3));
  EXPECT_MATRIX_NEAR(r.ginv, ComplexMatrix::zero(3, 3), 0.0);
  EXPECT_MATRIX_NEAR(r.spectral_projector, ComplexMatrix::identity(3), 0.0);
}

TEST(GroupInverse, InvertibleGivesInverse) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = random_invertible(6, 100.0, seed);
    EXPECT_LE(oracle::rel_diff(group_inverse(a).ginv, invert(a)), 1e-10);
  }
}

TEST(GroupInverse, IdempotentIsItsOwnInverse) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = random_invertible(5, 10.0, seed);
    const auto core = DenseMatrix::Identity(2, 2);
    const auto p = oracle::plant(s.eigen(), core).a;
    EXPECT_LE(oracle::rel_diff(group_inverse(p).ginv, p), 1e-10);
    EXPECT_LE(oracle::rel_diff(group_inverse_cline(p), p), 1e-10);
  }
}

TEST(GroupInverse, ClosedForm2x2Oracle) {
  // Exhaustive over 2x2 matrices with entries in {-1, 0, 1, 2}.
  const std::array<double, 4> vals{-1.0, 0.0, 1.0, 2.0};
  int checked = 0;
  for (double p : vals)
    for (double q : vals)
      for (double r : vals)
        for (double s : vals) {
          const auto a = ComplexMatrix::from_rows({{p, q}, {r, s}});
          const auto expected = oracle::group_inverse_2x2(a);
          if (expected) {
            EXPECT_MATRIX_NEAR(group_inverse(a).ginv, *expected, 1e-13);
            ++checked;
          } else {
            EXPECT_FALSE(is_group_invertible(a).invertible) << a.eigen();
          }
        }
  EXPECT_GT(checked, 200);
}

TEST(GroupInverse, PlantedOracleAndInvariants) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Index n = 1 + static_cast<Index>(seed % 12);
    const Index r = static_cast<Index>(seed % (n + 1));
    const auto pl = planted(n, r, 10.0, seed);
    const auto g = group_inverse(pl.a);
    EXPECT_EQ(g.rank, r);
    EXPECT_LE(oracle::rel_diff(g.ginv, pl.truth), 1e-10) << n << " " << r;
    EXPECT_TRUE(verify_group_axioms(pl.a, g.ginv).pass);
    const auto& e = g.group_projector;
    EXPECT_LE(frobenius_norm(e * e - e), 1e-10 * std::max(1.0, frobenius_norm(e)));
    EXPECT_MATRIX_NEAR(e + g.spectral_projector, ComplexMatrix::identity(n), 1e-15);
    // (a^#)^# = a
    EXPECT_LE(oracle::rel_diff(group_inverse(g.ginv).ginv, pl.a), 1e-8);
    // transpose commutes with ^#
    EXPECT_LE(oracle::rel_diff(group_inverse(transpose(pl.a)).ginv, transpose(g.ginv)), 1e-8);
  }
}

TEST(GroupInverse, IllConditionedCoreIsRefused) {
  const auto a = ComplexMatrix::diagonal({1.0, 1e-9, 0.0});
  Tolerance tol;
  tol.max_core_condition = 1e6;
  try {
    group_inverse(a, tol);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IllConditionedCore);
  }
  EXPECT_NO_THROW(group_inverse(a));
}

TEST(Cline, ExampleAndAgreement) {
  EXPECT_MATRIX_NEAR(group_inverse_cline(kA),
                     ComplexMatrix::from_rows({{-0.75, 0.25}, {-0.25, -0.25}}), 1e-14);
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    const Index n = 1 + static_cast<Index>(seed % 16);
    const Index r = static_cast<Index>((seed * 7) % (n + 1));
    const auto pl = planted(n, r, 10.0, seed);
    EXPECT_LE(relative_error(group_inverse_cline(pl.a), group_inverse(pl.a).ginv), 1e-8);
  }
  EXPECT_THROW(group_inverse_cline(kNil), Error);
}

TEST(Cline, StaysAccurateAtHighCoreCondition) {
  // a^3 has condition near 1e18 here; the oracle must still track the
  // planted truth to the accuracy the factorization route reaches.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = random_invertible(8, 10.0, derive_seed(seed, 1));
    const auto core = random_invertible(5, 1e6, derive_seed(seed, 2));
    const auto pl = oracle::plant(s.eigen(), core.eigen());
    EXPECT_LE(relative_error(group_inverse_cline(pl.a), pl.truth), 1e-8);
    EXPECT_LE(relative_error(group_inverse(pl.a).ginv, pl.truth), 1e-8);
  }
}

TEST(MoorePenrose, Examples) {
  EXPECT_MATRIX_NEAR(moore_penrose(ComplexMatrix::identity(3)), ComplexMatrix::identity(3),
                     1e-15);
  EXPECT_MATRIX_NEAR(moore_penrose(ComplexMatrix::zero(2, 3)), ComplexMatrix::zero(3, 2), 0.0);
  EXPECT_MATRIX_NEAR(moore_penrose(ComplexMatrix::diagonal({2.0, 0.0})),
                     ComplexMatrix::diagonal({0.5, 0.0}), 1e-15);
}

TEST(MoorePenrose, PenroseIdentities) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = random_general(5, 3, seed) * random_general(3, 7, seed + 50);
    const auto x = moore_penrose(a);
    const double na = frobenius_norm(a), nx = frobenius_norm(x);
    EXPECT_LE(frobenius_norm(a * x * a - a), 1e-10 * na);
    EXPECT_LE(frobenius_norm(x * a * x - x), 1e-10 * nx);
    const auto ax = a * x, xa = x * a;
    EXPECT_LE(frobenius_norm(ax - conj_transpose(ax)), 1e-10);
    EXPECT_LE(frobenius_norm(xa - conj_transpose(xa)), 1e-10);
  }
}

TEST(SpectralProjector, Examples) {
  EXPECT_MATRIX_NEAR(spectral_projector(group_inverse(random_invertible(3, 5.0, 1))),
                     ComplexMatrix::zero(3, 3), 1e-14);
  EXPECT_MATRIX_NEAR(spectral_projector(group_inverse(ComplexMatrix::diagonal({2.0, 0.0}))),
                     ComplexMatrix::diagonal({0.0, 1.0}), 1e-15);
  const auto p = spectral_projector(group_inverse(kB));
  EXPECT_MATRIX_NEAR(p, ComplexMatrix::from_rows({{1.0, -1.0}, {0.0, 0.0}}), 1e-15);
  EXPECT_LE(frobenius_norm(p * p - p), 1e-14);
}

TEST(TriangularBlock, ZeroCouplingIsBlockDiagonal) {
  const auto x = ComplexMatrix::diagonal({2.0, 0.0});
  const auto w = kB;
  const auto g = triangular_block_ginv(x, ComplexMatrix::zero(2, 2), w);
  EXPECT_MATRIX_NEAR(g, block_diagonal({ComplexMatrix::diagonal({0.5, 0.0}), kB}), 1e-15);
}

TEST(TriangularBlock, InvertibleCornerAndZeroCorner) {
  // [[x, y], [0, 0]] with x invertible: z = x^-2 y, checked against the axioms
  // and the 2x2 closed form.
  const auto x = ComplexMatrix::from_rows({{2.0}});
  const auto y = ComplexMatrix::from_rows({{3.0}});
  const auto w = ComplexMatrix::zero(1, 1);
  const auto g = triangular_block_ginv(x, y, w);
  EXPECT_MATRIX_NEAR(g, ComplexMatrix::from_rows({{0.5, 0.75}, {0.0, 0.0}}), 1e-15);
  const auto m = ComplexMatrix::from_rows({{2.0, 3.0}, {0.0, 0.0}});
  EXPECT_MATRIX_NEAR(g, *oracle::group_inverse_2x2(m), 1e-15);
  EXPECT_TRUE(verify_group_axioms(m, g).pass);
}

TEST(TriangularBlock, ViolatedConditionThrows) {
  // x = 0, w = 0: x^pi y w^pi = y.
  try {
    triangular_block_ginv(ComplexMatrix::zero(1, 1), ComplexMatrix::from_rows({{1.0}}),
                          ComplexMatrix::zero(1, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConditionViolated);
  }
}

TEST(TriangularBlock, MatchesAssembledOracleOnGeneratedSums) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (Complex lambda : {Complex(-2.0), Complex(0.0), Complex(0.5), Complex(1.0, 1.0)}) {
      GeneratorConfig cfg;
      cfg.dims = {2, 3};
      cfg.lambda = lambda;
      cfg.seed = seed;
      const auto g = gen_T24(cfg);
      // Canonical frame: a + b = [[(1 + lambda) B, A2], [0, A4]].
      const auto sum = g.canonical.a + g.canonical.b;
      const auto x = sum.block(0, 0, 2, 2);
      const auto y = sum.block(0, 2, 2, 3);
      const auto w = sum.block(2, 2, 3, 3);
      const auto t = triangular_block_ginv(x, y, w);
      EXPECT_LE(relative_error(t, group_inverse(sum).ginv), 1e-8);
    }
  }
}

TEST(Axioms, WorkedExampleSumPasses) {
  const auto x = ComplexMatrix::from_rows({{-1.0, 0.0}, {-0.5, -0.5}});
  const auto r = verify_group_axioms(kA + kB, x);
  EXPECT_TRUE(r.pass);
  EXPECT_LE(std::max({r.axa, r.xax, r.commute}), 1e-15);
}

TEST(Axioms, InversePairPasses) {
  const auto a = random_invertible(4, 10.0, 2);
  EXPECT_TRUE(verify_group_axioms(a, invert(a)).pass);
}

TEST(Axioms, NilpotentFailsForEveryCandidate) {
  // Exhaustive over X with entries in {-1, 0, 1}: some axiom always fails.
  const std::array<double, 3> vals{-1.0, 0.0, 1.0};
  for (double p : vals)
    for (double q : vals)
      for (double r : vals)
        for (double s : vals) {
          const auto x = ComplexMatrix::from_rows({{p, q}, {r, s}});
          EXPECT_FALSE(verify_group_axioms(kNil, x).pass) << x.eigen();
        }
  // Axiom one fails whenever x21 = 0: N X N = x21 N.
  EXPECT_GT(verify_group_axioms(kNil, ComplexMatrix::identity(2)).axa, 0.5);
}
