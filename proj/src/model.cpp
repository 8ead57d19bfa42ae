#include "ctxprob/model.hpp"

#include <algorithm>
#include <set>

#include "ctxprob/errors.hpp"

namespace ctxprob {

Model Model::create(std::vector<std::string> universe,
                    std::vector<std::pair<PredicateId, Event>> extensions) {
  if (universe.empty()) throw InvalidModel("universe must be nonempty");
  if (universe.size() > kMaxSamplePoints) throw InvalidModel("universe exceeds 2^20 points");
  {
    std::set<std::string> seen;
    for (const auto& u : universe) {
      if (!seen.insert(u).second) throw InvalidModel("duplicate individual '" + u + "'");
    }
  }
  Model m;
  m.universe_ = std::move(universe);
  std::map<Event, PredicateId> owner;
  for (auto& [predicate, event] : extensions) {
    if (!event.empty() && event.members().back() >= m.universe_.size()) {
      throw InvalidModel("extension of " + to_string(predicate) + " leaves the universe");
    }
    if (m.ext_.count(predicate) != 0) {
      throw InvalidModel("predicate " + to_string(predicate) + " registered twice");
    }
    auto [it, inserted] = owner.emplace(event, predicate);
    if (!inserted) {
      throw InvalidModel("extension map is not injective: " + to_string(predicate) +
                         " and " + to_string(it->second) + " share an extension");
    }
    m.order_.push_back(predicate);
    m.ext_.emplace(predicate, std::move(event));
  }
  return m;
}

std::optional<std::size_t> Model::index_of(const std::string& label) const {
  auto it = std::find(universe_.begin(), universe_.end(), label);
  if (it == universe_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - universe_.begin());
}

const Event& Model::ext(const PredicateId& predicate) const {
  auto it = ext_.find(predicate);
  if (it == ext_.end()) throw UnknownPredicate("unknown predicate " + to_string(predicate));
  return it->second;
}

Event extension(const Model& model, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::kAtom:
      return model.ext(f.predicate());
    case Formula::Kind::kNot:
      return extension(model, f.operand()).complement(model.size());
    case Formula::Kind::kAnd:
      return extension(model, f.lhs()).intersect(extension(model, f.rhs()));
    case Formula::Kind::kOr:
      return extension(model, f.lhs()).unite(extension(model, f.rhs()));
  }
  return {};
}

bool truth(const Model& model, Interpretation sigma, const Formula& f) {
  if (sigma.target >= model.size()) {
    throw MemberOutOfSpace("interpretation target outside the universe");
  }
  return extension(model, f).contains(sigma.target);
}

bool logical_leq(const Model& model, const Formula& a, const Formula& b) {
  return extension(model, a).subset_of(extension(model, b));
}

std::size_t LindenbaumQuotient::class_of(std::size_t formula_index) const {
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (std::find(classes[c].begin(), classes[c].end(), formula_index) != classes[c].end()) {
      return c;
    }
  }
  throw std::out_of_range("formula index not in quotient");
}

LindenbaumQuotient lindenbaum_classes(const Model& model, const std::vector<Formula>& fs) {
  LindenbaumQuotient q;
  std::map<Event, std::size_t> by_extension;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    Event e = extension(model, fs[i]);
    auto [it, inserted] = by_extension.emplace(e, q.classes.size());
    if (inserted) {
      q.classes.push_back({i});
      q.extensions.push_back(std::move(e));
    } else {
      q.classes[it->second].push_back(i);
    }
  }
  const auto n = q.classes.size();
  q.leq.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      q.leq[i][j] = q.extensions[i].subset_of(q.extensions[j]);
    }
  }
  return q;
}

std::vector<Formula> closure_representatives(const Model& model,
                                             const std::vector<PredicateId>& atoms) {
  std::vector<Formula> reps;
  std::set<Event> seen;
  auto offer = [&](Formula f) {
    Event e = extension(model, f);
    if (seen.insert(std::move(e)).second) reps.push_back(std::move(f));
  };
  for (const auto& a : atoms) offer(Formula::atom(a));
  std::size_t processed = 0;
  // Saturate: combine every new representative with all earlier ones.
  while (processed < reps.size()) {
    const std::size_t limit = reps.size();
    for (std::size_t i = processed; i < limit; ++i) {
      offer(Formula::negate(reps[i]));
      for (std::size_t j = 0; j <= i; ++j) {
        offer(Formula::conj(reps[j], reps[i]));
        offer(Formula::disj(reps[j], reps[i]));
      }
    }
    processed = limit;
  }
  return reps;
}

BooleanLatticeReport check_boolean_lattice(const LindenbaumQuotient& q) {
  BooleanLatticeReport report;
  const auto n = q.classes.size();
  report.class_count = n;
  auto fail = [&](std::string msg) {
    if (report.violations.size() < 32) report.violations.push_back(std::move(msg));
    report.passed = false;
  };
  if (n == 0) {
    fail("empty quotient");
    return report;
  }
  const auto& leq = q.leq;
  for (std::size_t i = 0; i < n; ++i) {
    if (!leq[i][i]) fail("not reflexive at class " + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && leq[i][j] && leq[j][i]) {
        fail("classes " + std::to_string(i) + " and " + std::to_string(j) + " are not distinct");
      }
      for (std::size_t k = 0; k < n; ++k) {
        if (leq[i][j] && leq[j][k] && !leq[i][k]) fail("order not transitive");
      }
    }
  }

  // glb/lub straight from the order relation.
  auto extremal = [&](std::size_t a, std::size_t b, bool lower) -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    for (std::size_t c = 0; c < n; ++c) {
      bool bound = lower ? (leq[c][a] && leq[c][b]) : (leq[a][c] && leq[b][c]);
      if (!bound) continue;
      if (!best || (lower ? leq[*best][c] : leq[c][*best])) best = c;
    }
    if (!best) return std::nullopt;
    for (std::size_t c = 0; c < n; ++c) {
      bool bound = lower ? (leq[c][a] && leq[c][b]) : (leq[a][c] && leq[b][c]);
      if (bound && !(lower ? leq[c][*best] : leq[*best][c])) return std::nullopt;
    }
    return best;
  };

  std::vector<std::vector<std::size_t>> meet(n, std::vector<std::size_t>(n));
  std::vector<std::vector<std::size_t>> join(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      auto m = extremal(a, b, true);
      auto j = extremal(a, b, false);
      if (!m || !j) {
        fail("classes " + std::to_string(a) + ", " + std::to_string(b) + " lack a meet or join");
        return report;
      }
      meet[a][b] = *m;
      join[a][b] = *j;
    }
  }

  std::optional<std::size_t> bottom;
  std::optional<std::size_t> top;
  for (std::size_t c = 0; c < n; ++c) {
    bool is_bottom = true;
    bool is_top = true;
    for (std::size_t d = 0; d < n; ++d) {
      is_bottom = is_bottom && leq[c][d];
      is_top = is_top && leq[d][c];
    }
    if (is_bottom) bottom = c;
    if (is_top) top = c;
  }
  if (!bottom || !top) {
    fail("missing least or greatest class");
    return report;
  }

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]]) {
          fail("distributivity fails at classes " + std::to_string(a) + ", " +
               std::to_string(b) + ", " + std::to_string(c));
        }
      }
    }
    bool complemented = false;
    for (std::size_t b = 0; b < n && !complemented; ++b) {
      complemented = meet[a][b] == *bottom && join[a][b] == *top;
    }
    if (!complemented) fail("class " + std::to_string(a) + " has no complement");
  }
  return report;
}

}  // namespace ctxprob
