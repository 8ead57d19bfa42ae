#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctxprob/formula.hpp"
#include "ctxprob/mu_prob.hpp"
#include "ctxprob/prob_space.hpp"

namespace ctxprob {

/// A macroscopic measurement procedure M: the properties it measures and the
/// discrete probability space (𝒞_M, ν_M) over its μ-contexts. Context labels
/// in `contexts` are context ids.
class MeasurementProcedure {
 public:
  MeasurementProcedure(std::string id, std::vector<PropertyId> measures,
                       FiniteProbabilitySpace contexts);

  const std::string& id() const noexcept { return id_; }
  /// Sorted, duplicate-free.
  const std::vector<PropertyId>& measures() const noexcept { return measures_; }
  const FiniteProbabilitySpace& contexts() const noexcept { return contexts_; }
  std::vector<ContextId> context_ids() const;
  bool measures_property(const PropertyId& e) const;
  bool has_context(const ContextId& c) const;
  /// ν_M({c}); throws UnknownContext.
  const Rational& weight(const ContextId& c) const;

 private:
  std::string id_;
  std::vector<PropertyId> measures_;
  FiniteProbabilitySpace contexts_;
};

/// The set of procedures together with the derived index E ↦ 𝓜_E.
class MeasurementRegistry {
 public:
  /// `declared` lists properties that must each have at least one procedure.
  /// Throws InvalidRegistry on duplicate ids or unmeasured declared properties.
  static MeasurementRegistry create(std::vector<MeasurementProcedure> procedures,
                                    const std::vector<PropertyId>& declared = {});

  const std::vector<MeasurementProcedure>& procedures() const noexcept { return procedures_; }
  /// Throws NoProcedure.
  const MeasurementProcedure& procedure(const std::string& id) const;
  /// 𝓜_E as procedure ids in registry order; throws UnknownProperty.
  const std::vector<std::string>& procedures_for(const PropertyId& e) const;
  bool knows_property(const PropertyId& e) const { return by_property_.count(e) != 0; }
  bool knows_context(const ContextId& c) const;
  std::vector<PropertyId> properties() const;

 private:
  MeasurementRegistry() = default;

  std::vector<MeasurementProcedure> procedures_;
  std::map<PropertyId, std::vector<std::string>> by_property_;
};

/// Properties jointly compatible: ∩ 𝓜_E ≠ ∅. Throws UnknownProperty, and
/// std::invalid_argument on an empty set.
bool compatible(const MeasurementRegistry& reg, const std::vector<PropertyId>& props);

struct TestabilityWitness {
  /// Every M in ∩𝓜_E whose context space contains `context`.
  std::vector<std::string> procedures;
  /// The shared context index; empty for state-only formulas, which are
  /// testable with any procedure.
  std::optional<ContextId> context;
};

/// Throws UnknownProperty / UnknownContext for atoms the registry never heard of.
std::optional<TestabilityWitness> is_testable(const MeasurementRegistry& reg, const Formula& f);

/// Property atoms and their contexts occurring in f.
std::vector<PropertyId> properties_of(const Formula& f);
std::vector<ContextId> contexts_of(const Formula& f);

struct ContextTerm {
  ContextId context;
  Rational weight;
  /// Absent for contexts with ν_M({C}) = 0, which do not contribute.
  std::optional<Rational> conditional;
};

struct MeanConditional {
  Rational mean;
  std::vector<ContextTerm> terms;
};

/// Σ_C ν_M({C}) p(a^C | b^C), with both formulas reindexed to each C of M.
/// Throws NotJointlyTestable, or ZeroConditioningEvent naming the context.
MeanConditional mean_conditional_detail(const MuContextualStructure& s,
                                        const MeasurementRegistry& reg, const Formula& a,
                                        const Formula& b, const std::string& procedure);

Rational mean_conditional(const MuContextualStructure& s, const MeasurementRegistry& reg,
                          const Formula& a, const Formula& b, const std::string& procedure);

struct ProcedureIndependenceReport {
  bool passed = true;
  bool vacuous = false;
  std::vector<std::pair<std::string, Rational>> means;
  Rational max_deviation;
  std::vector<std::string> errors;
};

/// Evaluates the mean under every procedure that measures all properties of
/// a ∧ b (the written context index is treated as a placeholder and moved to
/// each procedure's own contexts) and reports the largest pairwise gap.
ProcedureIndependenceReport check_procedure_independence(const MuContextualStructure& s,
                                                         const MeasurementRegistry& reg,
                                                         const Formula& a, const Formula& b,
                                                         const Rational& tolerance);

}  // namespace ctxprob
