#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grpinv/additive.hpp"
#include "grpinv/blockmat.hpp"
#include "grpinv/matrix.hpp"

namespace grpinv {

// Complete set of idempotents e_1..e_k: e_i e_j = 0 for i != j, e_i^2 = e_i,
// sum e_i = I. Built as S E_i S^{-1} from coordinate projectors E_i; the last
// one is I minus the others so the sum is exact.
class PeirceFrame {
 public:
  PeirceFrame(const ComplexMatrix& similarity, std::vector<Index> dims);

  const std::vector<ComplexMatrix>& projectors() const noexcept {
    return projectors_;
  }
  const std::vector<Index>& dims() const noexcept { return dims_; }

  // e_i a e_j
  ComplexMatrix peirce_block(const ComplexMatrix& a, std::size_t i,
                             std::size_t j) const;

  // max over i != j of ‖e_i e_j‖ and over i of ‖e_i^2 - e_i‖, relative to
  // max(1, ‖e_i‖ ‖e_j‖).
  double defect() const;

 private:
  std::vector<ComplexMatrix> projectors_;
  std::vector<Index> dims_;
};

enum class C23Mode { Commuting, Orthogonal };

struct GeneratorConfig {
  // T2.1: k1..k4; T2.4: {k, n - k}; C2.3: {n}; T3.1/T3.3: {n}; T3.5: {n, r}.
  std::vector<Index> dims;
  Complex lambda{1.0, 0.0};
  std::uint64_t seed = 0;
  double cond_bound = 10.0;
  C23Mode mode = C23Mode::Commuting;  // C2.3 only
};

std::string_view to_string(C23Mode m);

template <class Scenario>
struct Generated {
  Scenario instance;      // conjugated (or directly synthesized) instance
  Scenario canonical;     // Peirce normal form before conjugation
  ComplexMatrix similarity;
};

ComplexMatrix random_similarity(Index n, double cond_bound, std::uint64_t seed);

Generated<AdditiveScenario> gen_T21(const GeneratorConfig& cfg);
Generated<AdditiveScenario> gen_T24(const GeneratorConfig& cfg);
Generated<AdditiveScenario> gen_C23(const GeneratorConfig& cfg);
// Mirrors of gen_T21 / gen_T24 through dual().
Generated<AdditiveScenario> gen_C22(const GeneratorConfig& cfg);
Generated<AdditiveScenario> gen_C25(const GeneratorConfig& cfg);

Generated<BlockScenario> gen_T31(const GeneratorConfig& cfg);
Generated<BlockScenario> gen_T33(const GeneratorConfig& cfg);
Generated<BlockScenario> gen_T35(const GeneratorConfig& cfg);
Generated<BlockScenario> gen_C32(const GeneratorConfig& cfg);
Generated<BlockScenario> gen_C34(const GeneratorConfig& cfg);
Generated<BlockScenario> gen_C36(const GeneratorConfig& cfg);

Generated<AdditiveScenario> generate(AdditiveTheorem t,
                                     const GeneratorConfig& cfg);
Generated<BlockScenario> generate(BlockTheorem t, const GeneratorConfig& cfg);

// Peirce frame of a gen_T21 config: S applied to the k1..k4 coordinate split.
PeirceFrame frame_T21(const GeneratorConfig& cfg);

}  // namespace grpinv
