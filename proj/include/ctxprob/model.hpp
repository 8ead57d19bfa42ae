#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctxprob/formula.hpp"
#include "ctxprob/prob_space.hpp"

namespace ctxprob {

/// σ: the single variable x is sent to one individual object of U.
struct Interpretation {
  std::size_t target;
};

/// A universe of individual objects together with an injective extension
/// map from predicates to subsets of the universe. Closed world: atoms that
/// were not registered are errors.
class Model {
 public:
  /// Throws InvalidModel if an extension leaves U or two predicates share an
  /// extension.
  static Model create(std::vector<std::string> universe,
                      std::vector<std::pair<PredicateId, Event>> extensions);

  std::size_t size() const noexcept { return universe_.size(); }
  const std::vector<std::string>& universe() const noexcept { return universe_; }
  std::optional<std::size_t> index_of(const std::string& label) const;

  /// Registered predicates in registration order.
  const std::vector<PredicateId>& predicates() const noexcept { return order_; }
  bool has(const PredicateId& predicate) const { return ext_.count(predicate) != 0; }
  /// Throws UnknownPredicate.
  const Event& ext(const PredicateId& predicate) const;

 private:
  Model() = default;

  std::vector<std::string> universe_;
  std::vector<PredicateId> order_;
  std::map<PredicateId, Event> ext_;
};

Event extension(const Model& model, const Formula& f);
bool truth(const Model& model, Interpretation sigma, const Formula& f);
/// α < β: every interpretation making α true makes β true.
bool logical_leq(const Model& model, const Formula& a, const Formula& b);

/// Formulas grouped by logical equivalence, with the induced order on classes.
struct LindenbaumQuotient {
  /// Indices into the input formula list, one vector per class, in order of
  /// first appearance.
  std::vector<std::vector<std::size_t>> classes;
  std::vector<Event> extensions;
  /// leq[i][j] iff class i <' class j.
  std::vector<std::vector<bool>> leq;

  std::size_t class_of(std::size_t formula_index) const;
};

LindenbaumQuotient lindenbaum_classes(const Model& model, const std::vector<Formula>& fs);

/// One representative formula for each subset of U reachable from `atoms`
/// under ¬, ∧, ∨ (the generated Boolean subalgebra).
std::vector<Formula> closure_representatives(const Model& model,
                                             const std::vector<PredicateId>& atoms);

struct BooleanLatticeReport {
  bool passed = true;
  std::size_t class_count = 0;
  std::vector<std::string> violations;
};

/// Order-theoretic check that the quotient is a Boolean lattice: <' is a
/// partial order with bounds, meets and joins exist (as order glb/lub), the
/// lattice is distributive and every class has a complement. Requires the
/// formula list to be closed under the connectives up to ≡.
BooleanLatticeReport check_boolean_lattice(const LindenbaumQuotient& quotient);

}  // namespace ctxprob
