#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "ctxprob/measurement.hpp"
#include "ctxprob/mu_prob.hpp"
#include "ctxprob/q_structure.hpp"
#include "ctxprob/quantum.hpp"

namespace ctxprob {

/// How randomness is split between the individual objects and the μ-contexts.
///
///  * ontic: the universe carries R copies of each state; E_C holds the first
///    round(R·Q_S(E)) copies in every context. Per-context conditionals
///    already equal the Born value.
///  * deterministic-context: context C_j (j = 1..N) contains a whole state
///    block iff Q_S(E) ≥ (j - 1/2)/N. Per-context conditionals are 0 or 1 and
///    only the ν_M-average approaches the Born value (within 1/(2N)).
///  * hybrid: N·R cells per state are split across the N contexts with
///    context-dependent thresholds, so both sources of randomness are active.
enum class SchemeKind { kOntic, kDeterministicContext, kHybrid };

std::string to_string(SchemeKind kind);
/// Accepts "ontic", "deterministic-context", "hybrid"; throws std::invalid_argument.
SchemeKind parse_scheme_kind(const std::string& text);

struct EmbeddingScheme {
  SchemeKind kind = SchemeKind::kOntic;
  std::size_t context_count = 1;  // N
  std::size_t resolution = 1;     // R
};

struct EmbeddingOptions {
  /// Prior over preparations; uniform when empty. Must be positive and sum to 1.
  std::map<StateId, Rational> state_weights;
  /// Throw IrrationalBornValue instead of rounding when a Born value is not
  /// representable at the scheme's resolution.
  bool require_exact = false;
};

/// A Born value that the construction could only approximate.
struct Approximation {
  StateId state;
  PropertyId property;
  Rational born;
  Rational realized;
  Rational bias_bound;
};

struct Embedding {
  MuContextualStructure structure;
  MeasurementRegistry registry;
  QuantumModel target;
  EmbeddingScheme scheme;
  std::vector<std::vector<PropertyId>> groups;
  std::vector<Approximation> approximations;

  PropertySpace property_space() const;
};

/// Exact rational stand-in for a floating Born value: the simplest rational
/// within 1e-9.
Rational exact_born(double value);

/// Each group becomes one procedure "M<g>" with contexts "M<g>.c1".."M<g>.cN"
/// and uniform ν. Properties listed in several groups use ontic extensions
/// in every context so that all their procedures agree. Throws
/// IncompatibleGroup, UnknownProperty, InvalidRegistry, IrrationalBornValue.
Embedding build_embedding(const QuantumModel& target,
                          const std::vector<std::vector<PropertyId>>& groups,
                          const EmbeddingScheme& scheme, const EmbeddingOptions& options = {});

struct EmbeddingRow {
  StateId state;
  PropertyId property;
  Rational classical_mean;
  double born = 0.0;
  Rational born_exact;
  Rational deviation;
};

struct EmbeddingReport {
  bool passed = true;
  Rational max_deviation;
  std::vector<EmbeddingRow> rows;
  std::vector<std::string> violations;
};

/// Compares the classical mean P_S(E) with the Born value for every (S, E),
/// checks that sharing a procedure implies commuting projectors, and checks
/// procedure independence for properties measured by several procedures.
EmbeddingReport verify_embedding(const Embedding& e, const Rational& tolerance);

}  // namespace ctxprob
