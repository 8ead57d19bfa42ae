#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctxprob/rational.hpp"

namespace ctxprob {

/// Largest number of sample points a space may carry.
inline constexpr std::size_t kMaxSamplePoints = std::size_t{1} << 20;

/// A set of sample-point indices, kept sorted and duplicate-free.
class Event {
 public:
  Event() = default;
  Event(std::initializer_list<std::size_t> members);
  explicit Event(std::vector<std::size_t> members);

  static Event full(std::size_t size);

  const std::vector<std::size_t>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  bool contains(std::size_t point) const;
  bool subset_of(const Event& other) const;

  Event intersect(const Event& other) const;
  Event unite(const Event& other) const;
  Event minus(const Event& other) const;
  /// Complement relative to {0, ..., size-1}.
  Event complement(std::size_t size) const;

  friend bool operator==(const Event&, const Event&) = default;
  friend auto operator<=>(const Event& a, const Event& b) {
    return a.members_ <=> b.members_;
  }

 private:
  std::vector<std::size_t> members_;
};

/// Finite sample space with the full power set as event algebra and exact
/// rational point weights.
class FiniteProbabilitySpace {
 public:
  /// Validates non-negativity and exact normalization; throws InvalidSpace.
  static FiniteProbabilitySpace create(std::vector<std::string> labels,
                                       std::vector<Rational> weights);
  static FiniteProbabilitySpace uniform(std::vector<std::string> labels);
  /// Skips the weight checks (labels are still checked). Only meant for
  /// building negative fixtures that check_kolmogorov should reject.
  static FiniteProbabilitySpace unchecked(std::vector<std::string> labels,
                                          std::vector<Rational> weights);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const Rational& weight(std::size_t i) const { return weights_.at(i); }
  const std::vector<Rational>& weights() const noexcept { return weights_; }
  std::optional<std::size_t> index_of(const std::string& label) const;
  Event full_event() const { return Event::full(size()); }

  /// Event from point labels; throws MemberOutOfSpace for unknown labels.
  Event event_of(const std::vector<std::string>& labels) const;

 private:
  FiniteProbabilitySpace(std::vector<std::string> labels,
                         std::vector<Rational> weights);

  std::vector<std::string> labels_;
  std::vector<Rational> weights_;
  std::unordered_map<std::string, std::size_t> index_;
};

Rational measure(const FiniteProbabilitySpace& space, const Event& e);

/// measure(a ∩ b) / measure(b); throws ZeroConditioningEvent if measure(b) = 0.
Rational conditional(const FiniteProbabilitySpace& space, const Event& a,
                     const Event& b);

struct KolmogorovReport {
  bool passed = true;
  Rational total;
  Rational normalization_deficit;  // 1 - total
  std::size_t families_checked = 0;
  std::vector<std::string> violations;
};

/// Checks normalization, non-negativity and finite additivity over
/// `families` randomly drawn families of pairwise disjoint events. Exact.
KolmogorovReport check_kolmogorov(const FiniteProbabilitySpace& space,
                                  std::mt19937_64& rng,
                                  std::size_t families = 16);

}  // namespace ctxprob
