#include "ctxprob/prob_space.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>

#include "ctxprob/errors.hpp"

namespace ctxprob {

Event::Event(std::initializer_list<std::size_t> members)
    : Event(std::vector<std::size_t>(members)) {}

Event::Event(std::vector<std::size_t> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

Event Event::full(std::size_t size) {
  Event e;
  e.members_.resize(size);
  std::iota(e.members_.begin(), e.members_.end(), std::size_t{0});
  return e;
}

bool Event::contains(std::size_t point) const {
  return std::binary_search(members_.begin(), members_.end(), point);
}

bool Event::subset_of(const Event& other) const {
  return std::includes(other.members_.begin(), other.members_.end(),
                       members_.begin(), members_.end());
}

Event Event::intersect(const Event& other) const {
  Event out;
  std::set_intersection(members_.begin(), members_.end(), other.members_.begin(),
                        other.members_.end(), std::back_inserter(out.members_));
  return out;
}

Event Event::unite(const Event& other) const {
  Event out;
  std::set_union(members_.begin(), members_.end(), other.members_.begin(),
                 other.members_.end(), std::back_inserter(out.members_));
  return out;
}

Event Event::minus(const Event& other) const {
  Event out;
  std::set_difference(members_.begin(), members_.end(), other.members_.begin(),
                      other.members_.end(), std::back_inserter(out.members_));
  return out;
}

Event Event::complement(std::size_t size) const { return full(size).minus(*this); }

FiniteProbabilitySpace::FiniteProbabilitySpace(std::vector<std::string> labels,
                                               std::vector<Rational> weights)
    : labels_(std::move(labels)), weights_(std::move(weights)) {
  if (labels_.empty()) throw InvalidSpace("sample space must be nonempty");
  if (labels_.size() > kMaxSamplePoints) {
    throw InvalidSpace("sample space exceeds 2^20 points");
  }
  if (labels_.size() != weights_.size()) {
    throw InvalidSpace("label and weight counts differ");
  }
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw InvalidSpace("duplicate sample point '" + labels_[i] + "'");
    }
  }
}

FiniteProbabilitySpace FiniteProbabilitySpace::create(std::vector<std::string> labels,
                                                      std::vector<Rational> weights) {
  FiniteProbabilitySpace space(std::move(labels), std::move(weights));
  Rational total = 0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (space.weights_[i] < 0) {
      throw InvalidSpace("negative weight on '" + space.labels_[i] + "'");
    }
    total += space.weights_[i];
  }
  if (total != 1) {
    throw InvalidSpace("weights sum to " + format_rational(total) + ", not 1");
  }
  return space;
}

FiniteProbabilitySpace FiniteProbabilitySpace::uniform(std::vector<std::string> labels) {
  const auto n = labels.size();
  if (n == 0) throw InvalidSpace("sample space must be nonempty");
  std::vector<Rational> weights(n, Rational(1, static_cast<long long>(n)));
  return create(std::move(labels), std::move(weights));
}

FiniteProbabilitySpace FiniteProbabilitySpace::unchecked(std::vector<std::string> labels,
                                                         std::vector<Rational> weights) {
  return FiniteProbabilitySpace(std::move(labels), std::move(weights));
}

std::optional<std::size_t> FiniteProbabilitySpace::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Event FiniteProbabilitySpace::event_of(const std::vector<std::string>& labels) const {
  std::vector<std::size_t> members;
  members.reserve(labels.size());
  for (const auto& l : labels) {
    auto idx = index_of(l);
    if (!idx) throw MemberOutOfSpace("point '" + l + "' is not in the sample space");
    members.push_back(*idx);
  }
  return Event(std::move(members));
}

Rational measure(const FiniteProbabilitySpace& space, const Event& e) {
  Rational sum = 0;
  for (auto p : e.members()) {
    if (p >= space.size()) {
      throw MemberOutOfSpace("point index " + std::to_string(p) +
                             " outside sample space of size " +
                             std::to_string(space.size()));
    }
    sum += space.weight(p);
  }
  return sum;
}

Rational conditional(const FiniteProbabilitySpace& space, const Event& a,
                     const Event& b) {
  Rational denom = measure(space, b);
  if (denom == 0) throw ZeroConditioningEvent("conditioning event has measure 0");
  return measure(space, a.intersect(b)) / denom;
}

KolmogorovReport check_kolmogorov(const FiniteProbabilitySpace& space,
                                  std::mt19937_64& rng, std::size_t families) {
  KolmogorovReport report;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (space.weight(i) < 0) {
      report.violations.push_back("negative weight " + format_rational(space.weight(i)) +
                                  " on '" + space.label(i) + "'");
    }
  }
  report.total = measure(space, space.full_event());
  report.normalization_deficit = 1 - report.total;
  if (report.total != 1) {
    report.violations.push_back("normalization: total " + format_rational(report.total) +
                                ", deficit " +
                                format_rational(report.normalization_deficit));
  }

  // Each family: assign every point to one of k blocks or to no block.
  std::uniform_int_distribution<std::size_t> block_count(1, 6);
  for (std::size_t f = 0; f < families; ++f) {
    const std::size_t k = block_count(rng);
    std::uniform_int_distribution<std::size_t> pick(0, k);
    std::vector<std::vector<std::size_t>> blocks(k);
    for (std::size_t p = 0; p < space.size(); ++p) {
      auto b = pick(rng);
      if (b < k) blocks[b].push_back(p);
    }
    Event united;
    Rational summed = 0;
    for (auto& members : blocks) {
      Event block(std::move(members));
      summed += measure(space, block);
      united = united.unite(block);
    }
    Rational whole = measure(space, united);
    ++report.families_checked;
    if (whole != summed) {
      report.violations.push_back("additivity: family " + std::to_string(f) +
                                  " union " + format_rational(whole) + " vs sum " +
                                  format_rational(summed));
    }
  }
  report.passed = report.violations.empty();
  return report;
}

}  // namespace ctxprob
