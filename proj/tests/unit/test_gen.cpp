#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "grpinv/error.hpp"
#include "grpinv/gen.hpp"
#include "grpinv/linalg.hpp"
#include "oracles.hpp"

using namespace grpinv;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no grpinv::Error thrown";
  return ErrorCode::Io;
}

GeneratorConfig config(std::vector<Index> dims, Complex lambda, std::uint64_t seed,
                       C23Mode mode = C23Mode::Commuting) {
  GeneratorConfig cfg;
  cfg.dims = std::move(dims);
  cfg.lambda = lambda;
  cfg.seed = seed;
  cfg.mode = mode;
  return cfg;
}

double worst(const std::vector<NamedResidual>& rs) {
  double w = 0.0;
  for (const auto& r : rs) w = std::max(w, r.value);
  return w;
}

}  // namespace

TEST(PeirceFrame, CoordinateFrame) {
  const PeirceFrame f(ComplexMatrix::identity(4), {1, 2, 0, 1});
  ASSERT_EQ(f.projectors().size(), 4u);
  EXPECT_MATRIX_NEAR(f.projectors()[1], ComplexMatrix::diagonal({0.0, 1.0, 1.0, 0.0}), 0.0);
  EXPECT_MATRIX_NEAR(f.projectors()[2], ComplexMatrix::zero(4, 4), 0.0);
  EXPECT_EQ(f.defect(), 0.0);
  EXPECT_EQ(code_of([] { PeirceFrame(ComplexMatrix::identity(3), {1, 1}); }),
            ErrorCode::DimensionMismatch);
}

TEST(PeirceFrame, ConjugatedFrameIsComplete) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f = frame_T21(config({2, 1, 3, 2}, 1.0, seed));
    EXPECT_LE(f.defect(), 1e-12);
    auto sum = ComplexMatrix::zero(8, 8);
    for (const auto& e : f.projectors()) sum = sum + e;
    EXPECT_MATRIX_NEAR(sum, ComplexMatrix::identity(8), 1e-12);
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_EQ(rank_with_tol(f.projectors()[i]), f.dims()[i]);
    }
  }
}

TEST(PeirceFrame, T21OperandsLiveInTheirBlocks) {
  const auto cfg = config({2, 1, 2, 1}, 2.0, 4);
  const auto g = gen_T21(cfg);
  const auto f = frame_T21(cfg);
  const auto& a = g.instance.a;
  const auto& b = g.instance.b;
  const double na = frobenius_norm(a), nb = frobenius_norm(b);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_LE(frobenius_norm(f.peirce_block(a, i, 2)) / na, 1e-10);
    EXPECT_LE(frobenius_norm(f.peirce_block(a, i, 3)) / na, 1e-10);
    EXPECT_LE(frobenius_norm(f.peirce_block(b, i, 1)) / nb, 1e-10);
    EXPECT_LE(frobenius_norm(f.peirce_block(b, i, 3)) / nb, 1e-10);
  }
  EXPECT_LE(relative_error(f.peirce_block(a, 0, 0), 2.0 * f.peirce_block(b, 0, 0)), 1e-10);
}

TEST(Generators, HypothesesHoldOnCanonicalAndConjugatedForms) {
  struct Case {
    AdditiveTheorem t;
    std::vector<Index> dims;
    std::vector<Complex> lambdas;
    C23Mode mode;
  };
  const std::vector<Case> cases{
      {AdditiveTheorem::T2_1, {1, 2, 1, 1}, {-1.0, 0.5, 2.0, {1.0, 1.0}}, C23Mode::Commuting},
      {AdditiveTheorem::C2_2, {2, 0, 1, 1}, {-1.0, 0.5, 2.0}, C23Mode::Commuting},
      {AdditiveTheorem::C2_3, {5}, {1.0}, C23Mode::Commuting},
      {AdditiveTheorem::C2_3, {5}, {-1.0, 3.0, {0.0, 1.0}}, C23Mode::Orthogonal},
      {AdditiveTheorem::T2_4, {2, 3}, {0.0, -2.0, 0.5, {1.0, -1.0}}, C23Mode::Commuting},
      {AdditiveTheorem::C2_5, {1, 3}, {0.0, -2.0, 0.5}, C23Mode::Commuting},
  };
  for (const auto& c : cases) {
    for (Complex l : c.lambdas) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto g = generate(c.t, config(c.dims, l, seed, c.mode));
        EXPECT_EQ(g.instance.theorem, c.t);
        EXPECT_LE(worst(hypothesis_residuals(g.canonical)), 1e-12) << to_string(c.t);
        EXPECT_LE(worst(hypothesis_residuals(g.instance)), 1e-9) << to_string(c.t) << " " << l;
        EXPECT_LE(condition_number(g.similarity), 10.0 * (1.0 + 1e-9));
      }
    }
  }
}

TEST(Generators, BlockHypothesesHold) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (Complex l : {Complex(2.0), Complex(-0.5), Complex(1.0, 1.0)}) {
      for (auto t : {BlockTheorem::T3_1, BlockTheorem::C3_2, BlockTheorem::T3_3,
                     BlockTheorem::C3_4}) {
        const auto s = generate(t, config({3}, l, seed)).instance;
        EXPECT_EQ(s.theorem, t);
        EXPECT_LE(worst(check(s).residuals), 1e-9) << to_string(t);
      }
    }
    for (auto t : {BlockTheorem::T3_5, BlockTheorem::C3_6}) {
      const auto c = check(generate(t, config({4, 2}, 1.0, seed)).instance);
      EXPECT_LE(worst(c.residuals), 1e-9);
      EXPECT_TRUE(c.ranks->equal());
    }
  }
}

TEST(Generators, Deterministic) {
  const auto cfg = config({1, 2, 1, 1}, 2.0, 77);
  const auto x = gen_T21(cfg).instance;
  const auto y = gen_T21(cfg).instance;
  EXPECT_MATRIX_NEAR(x.a, y.a, 0.0);
  EXPECT_MATRIX_NEAR(x.b, y.b, 0.0);
  auto other = cfg;
  other.seed = 78;
  EXPECT_GT(oracle::max_diff(gen_T21(other).instance.a, x.a), 1e-3);
  other = cfg;
  other.lambda = 3.0;
  EXPECT_MATRIX_NEAR(gen_T21(other).instance.b, x.b, 0.0);
}

TEST(Generators, MirrorsAreDuals) {
  const auto cfg = config({1, 1, 2, 1}, 0.5, 5);
  const auto t = gen_T21(cfg);
  const auto c = gen_C22(cfg);
  EXPECT_EQ(c.instance.theorem, AdditiveTheorem::C2_2);
  EXPECT_MATRIX_NEAR(c.instance.a, transpose(t.instance.b), 0.0);
  EXPECT_MATRIX_NEAR(c.instance.b, transpose(t.instance.a), 0.0);
  const auto t31 = gen_T31(config({2}, 2.0, 1)).instance;
  const auto c32 = gen_C32(config({2}, 2.0, 1)).instance;
  EXPECT_MATRIX_NEAR(c32.A, transpose(t31.D), 0.0);
  EXPECT_MATRIX_NEAR(c32.B, transpose(t31.C), 0.0);
}

TEST(Generators, RejectUnreachableConfigs) {
  EXPECT_EQ(code_of([] { gen_T21(config({1, 1, 1, 1}, 0.0, 0)); }),
            ErrorCode::UnsupportedLambda);
  EXPECT_EQ(code_of([] { gen_T24(config({2, 2}, -1.0, 0)); }), ErrorCode::LambdaIsMinusOne);
  EXPECT_EQ(code_of([] { gen_T24(config({0, 2}, 1.0, 0)); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { gen_C23(config({3}, 2.0, 0, C23Mode::Commuting)); }),
            ErrorCode::UnsupportedMode);
  EXPECT_EQ(code_of([] { gen_T31(config({2}, -1.0, 0)); }), ErrorCode::UnsupportedLambda);
  EXPECT_EQ(code_of([] { gen_T35(config({2, 3}, 1.0, 0)); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { gen_T21(config({2, 2}, 1.0, 0)); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { gen_T21(config({0, 0, 0, 0}, 1.0, 0)); }),
            ErrorCode::DimensionMismatch);
}

TEST(Generators, LambdaZeroT24KeepsOperandGroupInvertible) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = gen_T24(config({2, 3}, 0.0, seed));
    EXPECT_TRUE(is_group_invertible(g.instance.a).invertible);
    EXPECT_TRUE(is_group_invertible(g.instance.a + g.instance.b).invertible);
  }
}
