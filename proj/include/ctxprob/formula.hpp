#pragma once

#include <compare>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ctxprob {

struct StateId {
  std::string name;
  friend auto operator<=>(const StateId&, const StateId&) = default;
};

struct PropertyId {
  std::string name;
  friend auto operator<=>(const PropertyId&, const PropertyId&) = default;
};

struct ContextId {
  std::string name;
  friend auto operator<=>(const ContextId&, const ContextId&) = default;
};

/// The predicate E_C: property E observed in μ-context C.
struct PropertyInContext {
  PropertyId property;
  ContextId context;
  friend auto operator<=>(const PropertyInContext&, const PropertyInContext&) = default;
};

using PredicateId = std::variant<StateId, PropertyInContext>;

/// Concrete atom syntax, e.g. "S:z+(x)" or "P:E@c1(x)".
std::string to_string(const PredicateId& predicate);

/// A well-formed formula in the single free variable x. Immutable; copies
/// share structure.
class Formula {
 public:
  enum class Kind { kAtom, kNot, kAnd, kOr };

  static Formula atom(PredicateId predicate);
  static Formula state(std::string name);
  static Formula property(std::string name, std::string context);
  static Formula negate(Formula operand);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);

  Kind kind() const noexcept;
  const PredicateId& predicate() const;  // kAtom only
  const Formula& operand() const;        // kNot only
  const Formula& lhs() const;            // kAnd / kOr
  const Formula& rhs() const;

  std::size_t depth() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

inline Formula operator!(Formula f) { return Formula::negate(std::move(f)); }
inline Formula operator&(Formula a, Formula b) { return Formula::conj(std::move(a), std::move(b)); }
inline Formula operator|(Formula a, Formula b) { return Formula::disj(std::move(a), std::move(b)); }

/// Parses the concrete grammar documented in docs/grammar.md.
/// Throws SyntaxError carrying the byte offset and the expected tokens.
Formula parse_formula(std::string_view text);

/// Canonical rendering with the minimum parentheses needed to re-parse to
/// the same tree.
std::string print(const Formula& f);

/// Every distinct atom in first-occurrence order.
std::vector<PredicateId> atoms_of(const Formula& f);

/// Rewrites every E@from atom to E@to.
Formula reindex(const Formula& f, const ContextId& from, const ContextId& to);

/// Uniformly shaped random formula of depth at most `max_depth` over `atoms`.
Formula random_formula(std::mt19937_64& rng, const std::vector<PredicateId>& atoms,
                       std::size_t max_depth);

}  // namespace ctxprob
