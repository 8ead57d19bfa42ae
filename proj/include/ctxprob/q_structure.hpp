#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctxprob/errors.hpp"
#include "ctxprob/formula.hpp"
#include "ctxprob/measurement.hpp"
#include "ctxprob/mu_prob.hpp"

namespace ctxprob {

struct PropertySpace {
  std::vector<PropertyId> properties;
  std::vector<StateId> states;
};

/// Finite, table-driven orthocomplemented lattice whose elements are named
/// by properties. Meet and join are derived from the order relation.
class OrthoLattice {
 public:
  /// Throws InvalidLattice if `leq` is not a partial order, lacks bounds, or
  /// some pair lacks a meet or a join.
  static OrthoLattice from_order(std::vector<PropertyId> elements,
                                 std::vector<std::vector<bool>> leq,
                                 std::vector<std::size_t> ortho);

  std::size_t size() const noexcept { return elements_.size(); }
  const std::vector<PropertyId>& elements() const noexcept { return elements_; }
  const PropertyId& element(std::size_t i) const { return elements_.at(i); }
  std::optional<std::size_t> index_of(const PropertyId& e) const;
  /// Throws UnknownProperty.
  std::size_t require(const PropertyId& e) const;

  bool leq(std::size_t a, std::size_t b) const { return leq_[a][b]; }
  std::size_t meet(std::size_t a, std::size_t b) const { return meet_[a][b]; }
  std::size_t join(std::size_t a, std::size_t b) const { return join_[a][b]; }
  std::size_t ortho(std::size_t a) const { return ortho_[a]; }
  std::size_t bottom() const noexcept { return bottom_; }
  std::size_t top() const noexcept { return top_; }
  /// a ⊥ b iff a ≺ b^⊥.
  bool orthogonal(std::size_t a, std::size_t b) const { return leq_[a][ortho_[b]]; }

  bool is_distributive() const;
  bool is_orthomodular() const;

 private:
  OrthoLattice() = default;

  std::vector<PropertyId> elements_;
  std::vector<std::vector<bool>> leq_;
  std::vector<std::vector<std::size_t>> meet_;
  std::vector<std::vector<std::size_t>> join_;
  std::vector<std::size_t> ortho_;
  std::size_t bottom_ = 0;
  std::size_t top_ = 0;
};

struct LatticeLawReport {
  bool passed = true;
  bool distributive = false;
  bool orthomodular = false;
  std::vector<std::string> violations;
};

/// Orthocomplementation laws: E^⊥⊥ = E, E ≺ F ⇒ F^⊥ ≺ E^⊥, E ⋒ E^⊥ = O,
/// E ⋓ E^⊥ = 𝖴. Distributivity and orthomodularity are informational.
LatticeLawReport verify_lattice_laws(const OrthoLattice& lattice);

namespace detail {

template <class T>
T abs_diff(const T& a, const T& b) {
  return a < b ? T(b - a) : T(a - b);
}

}  // namespace detail

/// P_S(E) for every registered (S, E).
template <class T>
class StateProbabilityFamily {
 public:
  void set(const StateId& s, const PropertyId& e, T value) {
    if (std::find(states_.begin(), states_.end(), s) == states_.end()) states_.push_back(s);
    if (std::find(properties_.begin(), properties_.end(), e) == properties_.end()) {
      properties_.push_back(e);
    }
    values_[{s, e}] = std::move(value);
  }

  const T& value(const StateId& s, const PropertyId& e) const {
    auto it = values_.find({s, e});
    if (it == values_.end()) {
      throw NotInDomain("no probability recorded for state " + s.name + ", property " + e.name);
    }
    return it->second;
  }

  bool has(const StateId& s, const PropertyId& e) const { return values_.count({s, e}) != 0; }
  const std::vector<StateId>& states() const noexcept { return states_; }
  const std::vector<PropertyId>& properties() const noexcept { return properties_; }
  bool complete() const { return values_.size() == states_.size() * properties_.size(); }

 private:
  std::vector<StateId> states_;
  std::vector<PropertyId> properties_;
  std::map<std::pair<StateId, PropertyId>, T> values_;
};

using ExactFamily = StateProbabilityFamily<Rational>;
using FloatFamily = StateProbabilityFamily<double>;

/// P_S(E) as the mean conditional probability of E@C given S under the
/// first procedure of 𝓜_E (or `procedure` when given). Throws NoProcedure,
/// ZeroConditioningEvent.
Rational property_probability(const MuContextualStructure& s, const MeasurementRegistry& reg,
                              const StateId& state, const PropertyId& property,
                              const std::optional<std::string>& procedure = std::nullopt);

ExactFamily property_probability_family(const MuContextualStructure& s,
                                        const MeasurementRegistry& reg,
                                        const PropertySpace& space);

/// E ≺ F iff P_S(E) ≤ P_S(F) for all S; ≈ is its symmetrization.
struct InducedPreorder {
  std::vector<PropertyId> elements;
  std::vector<std::vector<bool>> leq;
  /// Equivalence classes of ≈ as index lists, in order of first appearance.
  std::vector<std::vector<std::size_t>> classes;

  bool precedes(std::size_t a, std::size_t b) const { return leq[a][b]; }
  bool equivalent(std::size_t a, std::size_t b) const { return leq[a][b] && leq[b][a]; }
};

template <class T>
InducedPreorder induced_preorder(const StateProbabilityFamily<T>& family) {
  InducedPreorder out;
  out.elements = family.properties();
  const auto n = out.elements.size();
  out.leq.assign(n, std::vector<bool>(n, true));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (const auto& s : family.states()) {
        if (family.value(s, out.elements[b]) < family.value(s, out.elements[a])) {
          out.leq[a][b] = false;
          break;
        }
      }
    }
  }
  std::vector<bool> placed(n, false);
  for (std::size_t a = 0; a < n; ++a) {
    if (placed[a]) continue;
    std::vector<std::size_t> cls;
    for (std::size_t b = a; b < n; ++b) {
      if (!placed[b] && out.equivalent(a, b)) {
        cls.push_back(b);
        placed[b] = true;
      }
    }
    out.classes.push_back(std::move(cls));
  }
  return out;
}

template <class T>
struct AdditivityViolation {
  std::vector<PropertyId> family;
  T join_value;
  T summed;
};

template <class T>
struct GeneralizedMeasureReport {
  bool passed = true;
  T top_value;
  std::size_t families_checked = 0;
  std::vector<AdditivityViolation<T>> violations;
};

namespace detail {

// Calls visit(set) for every set of ≥2 pairwise-orthogonal non-bottom elements.
template <class Visit>
void for_each_orthogonal_family(const OrthoLattice& lattice, Visit&& visit) {
  std::vector<std::size_t> current;
  auto extend = [&](auto&& self, std::size_t from) -> void {
    for (std::size_t c = from; c < lattice.size(); ++c) {
      if (c == lattice.bottom()) continue;
      bool ok = true;
      for (auto d : current) ok = ok && lattice.orthogonal(c, d);
      if (!ok) continue;
      current.push_back(c);
      if (current.size() >= 2) visit(current);
      self(self, c + 1);
      current.pop_back();
    }
  };
  extend(extend, 0);
}

}  // namespace detail

/// Checks P_S(𝖴) = 1 and P_S(⋓ E_k) = Σ P_S(E_k) on every pairwise-orthogonal
/// family of the (finite) lattice, within `tolerance`.
template <class T>
GeneralizedMeasureReport<T> is_generalized_probability_measure(
    const OrthoLattice& lattice, const StateProbabilityFamily<T>& family, const StateId& s,
    const T& tolerance) {
  GeneralizedMeasureReport<T> report;
  auto p = [&](std::size_t i) -> const T& { return family.value(s, lattice.element(i)); };
  report.top_value = p(lattice.top());
  if (detail::abs_diff(report.top_value, T(1)) > tolerance) report.passed = false;
  detail::for_each_orthogonal_family(lattice, [&](const std::vector<std::size_t>& members) {
    ++report.families_checked;
    std::size_t joined = lattice.bottom();
    T summed = T(0);
    for (auto m : members) {
      joined = lattice.join(joined, m);
      summed += p(m);
    }
    const T& whole = p(joined);
    if (detail::abs_diff(whole, summed) > tolerance) {
      report.passed = false;
      AdditivityViolation<T> v{{}, whole, summed};
      for (auto m : members) v.family.push_back(lattice.element(m));
      report.violations.push_back(std::move(v));
    }
  });
  return report;
}

template <class T>
struct ConditioningWitness {
  PropertyId first;
  PropertyId second;
  PropertyId condition;
  /// P_S((E₁ ⋓ E₂) ⋒ F) / P_S(F)
  T joined_ratio;
  /// P_S(E₁ ⋒ F) / P_S(F) + P_S(E₂ ⋒ F) / P_S(F)
  T summed_ratio;
};

/// Searches orthogonal pairs E₁ ⊥ E₂ for which conditioning by the ratio
/// P_S(· ⋒ F) / P_S(F) is not additive. Returns the pair with the largest
/// gap (first found on ties), or nothing when every gap is within tolerance.
/// Throws ZeroConditioningEvent if P_S(F) = 0.
template <class T>
std::optional<ConditioningWitness<T>> classical_conditioning_failure_witness(
    const OrthoLattice& lattice, const StateProbabilityFamily<T>& family, const StateId& s,
    const PropertyId& condition, const T& tolerance) {
  const std::size_t f = lattice.require(condition);
  auto p = [&](std::size_t i) -> const T& { return family.value(s, lattice.element(i)); };
  const T pf = p(f);
  if (!(pf > T(0))) {
    throw ZeroConditioningEvent("P_" + s.name + "(" + condition.name + ") = 0");
  }
  std::optional<ConditioningWitness<T>> best;
  T best_gap = tolerance;
  for (std::size_t a = 0; a < lattice.size(); ++a) {
    for (std::size_t b = a + 1; b < lattice.size(); ++b) {
      if (!lattice.orthogonal(a, b)) continue;
      T lhs = p(lattice.meet(lattice.join(a, b), f)) / pf;
      T rhs = p(lattice.meet(a, f)) / pf + p(lattice.meet(b, f)) / pf;
      T gap = detail::abs_diff(lhs, rhs);
      if (gap > best_gap) {
        best_gap = gap;
        best = ConditioningWitness<T>{lattice.element(a), lattice.element(b), condition, lhs, rhs};
      }
    }
  }
  return best;
}

/// t_E for one property E: state ↦ state after a first-kind measurement.
using FirstKindMap = std::map<StateId, StateId>;

/// Returns t_E(S) after verifying S ∈ 𝒮_E and P_{t_E(S)}(E) = 1 (within
/// tolerance). Throws NotInDomain or PostconditionViolated.
template <class T>
StateId first_kind_transform(const StateProbabilityFamily<T>& family, const FirstKindMap& t_e,
                             const StateId& s, const PropertyId& e, const T& tolerance) {
  if (detail::abs_diff(family.value(s, e), T(0)) <= tolerance) {
    throw NotInDomain("state " + s.name + " is outside the domain of t_" + e.name +
                      " (P = 0)");
  }
  auto it = t_e.find(s);
  if (it == t_e.end()) {
    throw NotInDomain("t_" + e.name + " is not defined on state " + s.name);
  }
  if (!family.has(it->second, e) ||
      detail::abs_diff(family.value(it->second, e), T(1)) > tolerance) {
    throw PostconditionViolated("t_" + e.name + "(" + s.name + ") = " + it->second.name +
                                " does not make " + e.name + " certain");
  }
  return it->second;
}

/// P_S(E ‖ F) = P_{t_F(S)}(E): probability of E after a first-kind
/// measurement of F on S.
template <class T>
T conditional_q_probability(const StateProbabilityFamily<T>& family,
                            const std::map<PropertyId, FirstKindMap>& t_maps, const StateId& s,
                            const PropertyId& e, const PropertyId& f, const T& tolerance) {
  auto it = t_maps.find(f);
  if (it == t_maps.end()) throw NotInDomain("no first-kind map for property " + f.name);
  return family.value(first_kind_transform(family, it->second, s, f, tolerance), e);
}

/// Ratio-style conditioning P_S(E ⋒ F) / P_S(F). Throws ZeroConditioningEvent.
template <class T>
T lattice_ratio_conditional(const OrthoLattice& lattice, const StateProbabilityFamily<T>& family,
                            const StateId& s, const PropertyId& e, const PropertyId& f) {
  const auto ie = lattice.require(e);
  const auto jf = lattice.require(f);
  const T pf = family.value(s, f);
  if (!(pf > T(0))) throw ZeroConditioningEvent("P_" + s.name + "(" + f.name + ") = 0");
  return family.value(s, lattice.element(lattice.meet(ie, jf))) / pf;
}

}  // namespace ctxprob
