#pragma once

#include <random>
#include <string>
#include <vector>

#include "ctxprob/model.hpp"
#include "ctxprob/prob_space.hpp"

namespace ctxprob {

/// A model paired with a probability ξ over its universe. Ψ⁺ membership is
/// decided on demand from ξ.
class MuContextualStructure {
 public:
  /// Throws InvalidModel unless xi's points are exactly the model universe,
  /// in the same order.
  MuContextualStructure(Model model, FiniteProbabilitySpace xi);

  const Model& model() const noexcept { return model_; }
  const FiniteProbabilitySpace& xi() const noexcept { return xi_; }

  /// b ∈ Ψ⁺ iff ξ(ext(b)) ≠ 0.
  bool conditionable(const Formula& b) const;

 private:
  Model model_;
  FiniteProbabilitySpace xi_;
};

/// p(a | b) = ξ(ext a ∩ ext b) / ξ(ext b). Throws ZeroConditioningEvent if
/// b ∉ Ψ⁺.
Rational mu_conditional(const MuContextualStructure& s, const Formula& a, const Formula& b);

/// p(a) = ξ(ext a).
Rational mu_absolute(const MuContextualStructure& s, const Formula& a);

struct Prop41Report {
  bool passed = true;
  std::size_t normalization_checks = 0;
  std::size_t additivity_checks = 0;
  std::size_t inclusion_exclusion_checks = 0;
  std::vector<std::string> violations;
};

/// Checks that α ↦ p(α | b) is a probability measure on formulas: p_b(α)=1
/// whenever ext(α)=U, additivity for disjoint α₁, α₂, and inclusion-exclusion
/// for arbitrary pairs. Formulas are random over the model's predicates.
/// Throws ZeroConditioningEvent if b ∉ Ψ⁺.
Prop41Report check_prop_4_1(const MuContextualStructure& s, const Formula& b,
                            std::size_t trials, std::mt19937_64& rng,
                            std::size_t max_depth = 4);

}  // namespace ctxprob
