#include "ctxprob/mu_prob.hpp"

#include "ctxprob/errors.hpp"

namespace ctxprob {

MuContextualStructure::MuContextualStructure(Model model, FiniteProbabilitySpace xi)
    : model_(std::move(model)), xi_(std::move(xi)) {
  if (model_.universe() != xi_.labels()) {
    throw InvalidModel("xi must be defined on exactly the model universe");
  }
}

bool MuContextualStructure::conditionable(const Formula& b) const {
  return measure(xi_, extension(model_, b)) != 0;
}

Rational mu_conditional(const MuContextualStructure& s, const Formula& a, const Formula& b) {
  Event eb = extension(s.model(), b);
  Rational denom = measure(s.xi(), eb);
  if (denom == 0) {
    throw ZeroConditioningEvent("conditioning formula " + print(b) + " is not in Psi+");
  }
  return measure(s.xi(), extension(s.model(), a).intersect(eb)) / denom;
}

Rational mu_absolute(const MuContextualStructure& s, const Formula& a) {
  return measure(s.xi(), extension(s.model(), a));
}

Prop41Report check_prop_4_1(const MuContextualStructure& s, const Formula& b,
                            std::size_t trials, std::mt19937_64& rng,
                            std::size_t max_depth) {
  if (!s.conditionable(b)) {
    throw ZeroConditioningEvent("conditioning formula " + print(b) + " is not in Psi+");
  }
  Prop41Report report;
  const auto& atoms = s.model().predicates();
  auto p = [&](const Formula& a) { return mu_conditional(s, a, b); };
  auto fail = [&](std::string msg) {
    report.passed = false;
    report.violations.push_back(std::move(msg));
  };
  const Event universe = Event::full(s.model().size());

  for (std::size_t t = 0; t < trials; ++t) {
    Formula g = random_formula(rng, atoms, max_depth);
    Formula a1 = random_formula(rng, atoms, max_depth);
    Formula a2 = random_formula(rng, atoms, max_depth);

    // (i) normalization on tautologies.
    Formula taut = g | !g;
    ++report.normalization_checks;
    if (extension(s.model(), taut) != universe || p(taut) != 1) {
      fail("normalization fails for " + print(taut));
    }

    // (ii) additivity on a forced-disjoint pair, and on the random pair when
    // it happens to be disjoint.
    Formula d2 = a2 & !a1;
    ++report.additivity_checks;
    if (p(a1 | d2) != p(a1) + p(d2)) {
      fail("additivity fails for " + print(a1) + " , " + print(d2));
    }
    if (extension(s.model(), a1).intersect(extension(s.model(), a2)).empty()) {
      ++report.additivity_checks;
      if (p(a1 | a2) != p(a1) + p(a2)) {
        fail("additivity fails for " + print(a1) + " , " + print(a2));
      }
    }

    ++report.inclusion_exclusion_checks;
    if (p(a1 | a2) != p(a1) + p(a2) - p(a1 & a2)) {
      fail("inclusion-exclusion fails for " + print(a1) + " , " + print(a2));
    }
  }
  return report;
}

}  // namespace ctxprob
