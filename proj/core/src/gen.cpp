#include "grpinv/gen.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "grpinv/error.hpp"
#include "grpinv/linalg.hpp"
#include "grpinv/random.hpp"

namespace grpinv {

namespace {

// Sub-stream ids so every block draws from its own reproducible stream and
// blocks that do not depend on lambda stay identical when only lambda changes.
enum Stream : std::uint64_t {
  kSimilarity = 1,
  kBlock1,
  kBlock2,
  kBlock3,
  kBlock4,
  kBlock5,
  kBlock6,
  kPattern,
};

std::uint64_t stream(const GeneratorConfig& cfg, Stream s) {
  return derive_seed(cfg.seed, s);
}

Index total(const std::vector<Index>& dims) {
  return std::accumulate(dims.begin(), dims.end(), Index{0});
}

void require_dims(const GeneratorConfig& cfg, std::size_t count,
                  const char* what) {
  const bool ok = cfg.dims.size() == count &&
                  std::all_of(cfg.dims.begin(), cfg.dims.end(),
                              [](Index d) { return d >= 0; }) &&
                  total(cfg.dims) > 0;
  if (!ok) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": expected " + std::to_string(count) +
                    " non-negative dims, not all zero");
  }
}

ComplexMatrix invertible_or_empty(Index n, double cond, std::uint64_t seed) {
  return n == 0 ? ComplexMatrix::zero(0, 0) : random_invertible(n, cond, seed);
}

// Places blocks into an n x n matrix on the grid given by `dims`.
class BlockGrid {
 public:
  explicit BlockGrid(std::vector<Index> dims)
      : dims_(std::move(dims)), offsets_(dims_.size() + 1, 0) {
    std::partial_sum(dims_.begin(), dims_.end(), offsets_.begin() + 1);
    values_ = DenseMatrix::Zero(offsets_.back(), offsets_.back());
  }

  BlockGrid& set(std::size_t i, std::size_t j, const ComplexMatrix& m) {
    values_.block(offsets_[i], offsets_[j], dims_[i], dims_[j]) = m.eigen();
    return *this;
  }

  ComplexMatrix build() const { return ComplexMatrix(values_); }

 private:
  std::vector<Index> dims_;
  std::vector<Index> offsets_;
  DenseMatrix values_;
};

ComplexMatrix conjugate(const ComplexMatrix& s, const ComplexMatrix& s_inv,
                        const ComplexMatrix& m) {
  return s * m * s_inv;
}

// T diag(invertible(r), 0) T^{-1}: a group invertible matrix of rank r.
ComplexMatrix group_invertible_of_rank(Index n, Index r, double cond,
                                       std::uint64_t seed) {
  if (n == 0) return ComplexMatrix::zero(0, 0);
  const auto core = block_diagonal(
      {invertible_or_empty(r, cond, derive_seed(seed, 1)),
       ComplexMatrix::zero(n - r, n - r)});
  const auto t = random_similarity(n, cond, derive_seed(seed, 2));
  return conjugate(t, invert(t), core);
}

template <class Scenario>
Generated<Scenario> mirrored(Generated<Scenario> g) {
  return {dual(g.instance), dual(g.canonical), transpose(invert(g.similarity))};
}

}  // namespace

PeirceFrame::PeirceFrame(const ComplexMatrix& similarity, std::vector<Index> dims)
    : dims_(std::move(dims)) {
  const auto n = similarity.rows();
  if (total(dims_) != n || !similarity.is_square()) {
    throw Error(ErrorCode::DimensionMismatch,
                "PeirceFrame: dims do not sum to the similarity size");
  }
  const auto s_inv = invert(similarity);
  auto rest = ComplexMatrix::identity(n);
  Index offset = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (i + 1 == dims_.size()) {
      projectors_.push_back(rest);
      break;
    }
    DenseMatrix e = DenseMatrix::Zero(n, n);
    e.block(offset, offset, dims_[i], dims_[i]).setIdentity();
    auto p = conjugate(similarity, s_inv, ComplexMatrix(std::move(e)));
    rest = rest - p;
    projectors_.push_back(std::move(p));
    offset += dims_[i];
  }
}

ComplexMatrix PeirceFrame::peirce_block(const ComplexMatrix& a, std::size_t i,
                                        std::size_t j) const {
  return projectors_.at(i) * a * projectors_.at(j);
}

double PeirceFrame::defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < projectors_.size(); ++i) {
    const auto& ei = projectors_[i];
    for (std::size_t j = 0; j < projectors_.size(); ++j) {
      const auto& ej = projectors_[j];
      const auto d = i == j ? ei * ei - ei : ei * ej;
      worst = std::max(worst, normalized_residual(
                                  d, frobenius_norm(ei) * frobenius_norm(ej)));
    }
  }
  return worst;
}

std::string_view to_string(C23Mode m) {
  return m == C23Mode::Commuting ? "commuting" : "orthogonal";
}

ComplexMatrix random_similarity(Index n, double cond_bound, std::uint64_t seed) {
  return random_invertible(n, cond_bound, seed);
}

Generated<AdditiveScenario> gen_T21(const GeneratorConfig& cfg) {
  require_dims(cfg, 4, "gen_T21");
  if (is_zero(cfg.lambda)) {
    throw Error(ErrorCode::UnsupportedLambda,
                "gen_T21: lambda = 0 leaves a_1 = lambda b_1 singular");
  }
  const auto& k = cfg.dims;
  const double cb = cfg.cond_bound;
  const auto b1 = invertible_or_empty(k[0], cb, stream(cfg, kBlock1));
  const auto a4 = invertible_or_empty(k[1], cb, stream(cfg, kBlock2));
  const auto b4 = invertible_or_empty(k[2], cb, stream(cfg, kBlock3));
  const auto a2 = random_general(k[0], k[1], stream(cfg, kBlock4));
  const auto b2 = random_general(k[0], k[2], stream(cfg, kBlock5));

  const auto a = BlockGrid(k).set(0, 0, cfg.lambda * b1).set(0, 1, a2)
                     .set(1, 1, a4).build();
  const auto b = BlockGrid(k).set(0, 0, b1).set(0, 2, b2).set(2, 2, b4).build();

  const auto s = random_similarity(total(k), cb, stream(cfg, kSimilarity));
  const auto s_inv = invert(s);
  AdditiveScenario canonical{AdditiveTheorem::T2_1, cfg.lambda, a, b};
  AdditiveScenario inst{AdditiveTheorem::T2_1, cfg.lambda,
                        conjugate(s, s_inv, a), conjugate(s, s_inv, b)};
  return {std::move(inst), std::move(canonical), s};
}

PeirceFrame frame_T21(const GeneratorConfig& cfg) {
  require_dims(cfg, 4, "frame_T21");
  return PeirceFrame(
      random_similarity(total(cfg.dims), cfg.cond_bound,
                        stream(cfg, kSimilarity)),
      cfg.dims);
}

Generated<AdditiveScenario> gen_T24(const GeneratorConfig& cfg) {
  require_dims(cfg, 2, "gen_T24");
  if (cfg.dims[0] < 1) {
    throw Error(ErrorCode::DimensionMismatch, "gen_T24: need k >= 1");
  }
  if (is_minus_one(cfg.lambda)) {
    throw Error(ErrorCode::LambdaIsMinusOne, "gen_T24: lambda = -1 excluded");
  }
  const Index k = cfg.dims[0];
  const Index m = cfg.dims[1];
  const double cb = cfg.cond_bound;

  Engine engine(stream(cfg, kPattern));
  const Index r4 = std::uniform_int_distribution<Index>(0, m)(engine);
  const auto bk = random_invertible(k, cb, stream(cfg, kBlock1));
  const auto a4 = group_invertible_of_rank(m, r4, cb, stream(cfg, kBlock2));
  // With lambda = 0 the corner lambda b vanishes and a is group invertible
  // only if a2 a4^pi = 0; a2 = Z a4 guarantees it.
  const auto a2 = is_zero(cfg.lambda)
                      ? random_general(k, m, stream(cfg, kBlock3)) * a4
                      : random_general(k, m, stream(cfg, kBlock3));

  const std::vector<Index> grid{k, m};
  const auto a = BlockGrid(grid).set(0, 0, cfg.lambda * bk).set(0, 1, a2)
                     .set(1, 1, a4).build();
  const auto b = BlockGrid(grid).set(0, 0, bk).build();

  const auto s = random_similarity(k + m, cb, stream(cfg, kSimilarity));
  const auto s_inv = invert(s);
  AdditiveScenario canonical{AdditiveTheorem::T2_4, cfg.lambda, a, b};
  AdditiveScenario inst{AdditiveTheorem::T2_4, cfg.lambda,
                        conjugate(s, s_inv, a), conjugate(s, s_inv, b)};
  return {std::move(inst), std::move(canonical), s};
}

Generated<AdditiveScenario> gen_C23(const GeneratorConfig& cfg) {
  require_dims(cfg, 1, "gen_C23");
  if (cfg.mode == C23Mode::Commuting && std::abs(cfg.lambda - 1.0) > 1e-12) {
    throw Error(ErrorCode::UnsupportedMode,
                "gen_C23: commuting idempotents need lambda = 1");
  }
  const Index n = cfg.dims[0];
  Engine engine(stream(cfg, kPattern));
  std::vector<Complex> pa(static_cast<std::size_t>(n));
  std::vector<Complex> pb(static_cast<std::size_t>(n));
  if (cfg.mode == C23Mode::Commuting) {
    std::bernoulli_distribution coin(0.5);
    for (Index i = 0; i < n; ++i) {
      pa[static_cast<std::size_t>(i)] = coin(engine) ? 1.0 : 0.0;
      pb[static_cast<std::size_t>(i)] = coin(engine) ? 1.0 : 0.0;
    }
  } else {
    // 0: neither, 1: a only, 2: b only
    std::uniform_int_distribution<int> owner(0, 2);
    for (Index i = 0; i < n; ++i) {
      const int o = owner(engine);
      pa[static_cast<std::size_t>(i)] = o == 1 ? 1.0 : 0.0;
      pb[static_cast<std::size_t>(i)] = o == 2 ? 1.0 : 0.0;
    }
  }
  const auto a = ComplexMatrix::diagonal(pa);
  const auto b = ComplexMatrix::diagonal(pb);
  const auto s = random_similarity(n, cfg.cond_bound, stream(cfg, kSimilarity));
  const auto s_inv = invert(s);
  AdditiveScenario canonical{AdditiveTheorem::C2_3, cfg.lambda, a, b};
  AdditiveScenario inst{AdditiveTheorem::C2_3, cfg.lambda,
                        conjugate(s, s_inv, a), conjugate(s, s_inv, b)};
  return {std::move(inst), std::move(canonical), s};
}

Generated<AdditiveScenario> gen_C22(const GeneratorConfig& cfg) {
  return mirrored(gen_T21(cfg));
}

Generated<AdditiveScenario> gen_C25(const GeneratorConfig& cfg) {
  return mirrored(gen_T24(cfg));
}

Generated<BlockScenario> gen_T31(const GeneratorConfig& cfg) {
  require_dims(cfg, 1, "gen_T31");
  if (is_zero(cfg.lambda) || is_minus_one(cfg.lambda)) {
    throw Error(ErrorCode::UnsupportedLambda,
                "gen_T31: lambda must avoid 0 and -1");
  }
  const Index n = cfg.dims[0];
  const auto c = random_invertible(n, cfg.cond_bound, stream(cfg, kBlock1));
  const auto d = random_invertible(n, cfg.cond_bound, stream(cfg, kBlock2));
  const auto c_inv = invert(c);
  // A C D^{-1} = lambda C and B C D^{-1} = lambda D; A, D invertible.
  const auto a = cfg.lambda * (c * d * c_inv);
  const auto b = cfg.lambda * (d * d * c_inv);
  BlockScenario s{BlockTheorem::T3_1, cfg.lambda, a, b, c, d};
  return {s, s, ComplexMatrix::identity(n)};
}

Generated<BlockScenario> gen_T33(const GeneratorConfig& cfg) {
  require_dims(cfg, 1, "gen_T33");
  if (is_zero(cfg.lambda) || is_minus_one(cfg.lambda)) {
    throw Error(ErrorCode::UnsupportedLambda,
                "gen_T33: lambda must avoid 0 and -1");
  }
  const Index n = cfg.dims[0];
  const auto a = random_invertible(n, cfg.cond_bound, stream(cfg, kBlock1));
  const auto c = random_invertible(n, cfg.cond_bound, stream(cfg, kBlock2));
  // A^# A = I, so the hypotheses read B = lambda A and D = lambda C.
  BlockScenario s{BlockTheorem::T3_3, cfg.lambda, a, cfg.lambda * a, c,
                  cfg.lambda * c};
  return {s, s, ComplexMatrix::identity(n)};
}

Generated<BlockScenario> gen_T35(const GeneratorConfig& cfg) {
  require_dims(cfg, 2, "gen_T35");
  const Index n = cfg.dims[0];
  const Index r = cfg.dims[1];
  if (n < 1 || r > n) {
    throw Error(ErrorCode::DimensionMismatch, "gen_T35: need n >= 1, 0 <= r <= n");
  }
  if (std::abs(cfg.lambda - 1.0) > 1e-12) {
    throw Error(ErrorCode::UnsupportedLambda,
                "gen_T35: only lambda = 1 is constructible");
  }
  const std::vector<Index> grid{r, n - r};
  const auto a = BlockGrid(grid).set(0, 0, ComplexMatrix::identity(r)).build();
  const auto d = BlockGrid(grid)
                     .set(0, 0, ComplexMatrix::identity(r))
                     .set(1, 0, random_general(n - r, r, stream(cfg, kBlock1)))
                     .build();
  const auto id = ComplexMatrix::identity(n);
  BlockScenario canonical{BlockTheorem::T3_5, cfg.lambda, a, id, id, d};

  const auto s = random_similarity(n, cfg.cond_bound, stream(cfg, kSimilarity));
  const auto s_inv = invert(s);
  BlockScenario inst{BlockTheorem::T3_5, cfg.lambda, conjugate(s, s_inv, a),
                     conjugate(s, s_inv, id), conjugate(s, s_inv, id),
                     conjugate(s, s_inv, d)};
  return {std::move(inst), std::move(canonical), s};
}

Generated<BlockScenario> gen_C32(const GeneratorConfig& cfg) {
  return mirrored(gen_T31(cfg));
}

Generated<BlockScenario> gen_C34(const GeneratorConfig& cfg) {
  return mirrored(gen_T33(cfg));
}

Generated<BlockScenario> gen_C36(const GeneratorConfig& cfg) {
  return mirrored(gen_T35(cfg));
}

Generated<AdditiveScenario> generate(AdditiveTheorem t,
                                     const GeneratorConfig& cfg) {
  switch (t) {
    case AdditiveTheorem::T2_1: return gen_T21(cfg);
    case AdditiveTheorem::C2_2: return gen_C22(cfg);
    case AdditiveTheorem::C2_3: return gen_C23(cfg);
    case AdditiveTheorem::T2_4: return gen_T24(cfg);
    case AdditiveTheorem::C2_5: return gen_C25(cfg);
  }
  throw Error(ErrorCode::UnknownTheorem, "generate: unknown additive theorem");
}

Generated<BlockScenario> generate(BlockTheorem t, const GeneratorConfig& cfg) {
  switch (t) {
    case BlockTheorem::T3_1: return gen_T31(cfg);
    case BlockTheorem::C3_2: return gen_C32(cfg);
    case BlockTheorem::T3_3: return gen_T33(cfg);
    case BlockTheorem::C3_4: return gen_C34(cfg);
    case BlockTheorem::T3_5: return gen_T35(cfg);
    case BlockTheorem::C3_6: return gen_C36(cfg);
  }
  throw Error(ErrorCode::UnknownTheorem, "generate: unknown block theorem");
}

}  // namespace grpinv
