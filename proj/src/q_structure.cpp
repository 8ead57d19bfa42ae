#include "ctxprob/q_structure.hpp"

namespace ctxprob {

OrthoLattice OrthoLattice::from_order(std::vector<PropertyId> elements,
                                      std::vector<std::vector<bool>> leq,
                                      std::vector<std::size_t> ortho) {
  const auto n = elements.size();
  if (n == 0) throw InvalidLattice("lattice must have at least one element");
  if (leq.size() != n || ortho.size() != n) throw InvalidLattice("table sizes disagree");
  for (const auto& row : leq) {
    if (row.size() != n) throw InvalidLattice("order table is not square");
  }
  for (auto o : ortho) {
    if (o >= n) throw InvalidLattice("ortho map leaves the lattice");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (elements[i] == elements[j]) throw InvalidLattice("duplicate element " + elements[i].name);
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (!leq[a][a]) throw InvalidLattice("order not reflexive at " + elements[a].name);
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && leq[a][b] && leq[b][a]) {
        throw InvalidLattice("order not antisymmetric: " + elements[a].name + ", " +
                             elements[b].name);
      }
      for (std::size_t c = 0; c < n; ++c) {
        if (leq[a][b] && leq[b][c] && !leq[a][c]) {
          throw InvalidLattice("order not transitive at " + elements[a].name);
        }
      }
    }
  }

  OrthoLattice l;
  l.meet_.assign(n, std::vector<std::size_t>(n));
  l.join_.assign(n, std::vector<std::size_t>(n));
  auto extremal = [&](std::size_t a, std::size_t b, bool lower) {
    auto bound = [&](std::size_t c) {
      return lower ? (leq[c][a] && leq[c][b]) : (leq[a][c] && leq[b][c]);
    };
    for (std::size_t c = 0; c < n; ++c) {
      if (!bound(c)) continue;
      bool extreme = true;
      for (std::size_t d = 0; d < n && extreme; ++d) {
        if (bound(d)) extreme = lower ? leq[d][c] : leq[c][d];
      }
      if (extreme) return c;
    }
    throw InvalidLattice(std::string(lower ? "no meet" : "no join") + " for " +
                         elements[a].name + ", " + elements[b].name);
  };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      l.meet_[a][b] = extremal(a, b, true);
      l.join_[a][b] = extremal(a, b, false);
    }
  }
  std::size_t bottom = 0;
  std::size_t top = 0;
  for (std::size_t a = 1; a < n; ++a) {
    bottom = l.meet_[bottom][a];
    top = l.join_[top][a];
  }
  l.bottom_ = bottom;
  l.top_ = top;
  l.elements_ = std::move(elements);
  l.leq_ = std::move(leq);
  l.ortho_ = std::move(ortho);
  return l;
}

std::optional<std::size_t> OrthoLattice::index_of(const PropertyId& e) const {
  auto it = std::find(elements_.begin(), elements_.end(), e);
  if (it == elements_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - elements_.begin());
}

std::size_t OrthoLattice::require(const PropertyId& e) const {
  auto idx = index_of(e);
  if (!idx) throw UnknownProperty("lattice has no element " + e.name);
  return *idx;
}

bool OrthoLattice::is_distributive() const {
  const auto n = size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (meet_[a][join_[b][c]] != join_[meet_[a][b]][meet_[a][c]]) return false;
      }
    }
  }
  return true;
}

bool OrthoLattice::is_orthomodular() const {
  const auto n = size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (leq_[a][b] && join_[a][meet_[ortho_[a]][b]] != b) return false;
    }
  }
  return true;
}

LatticeLawReport verify_lattice_laws(const OrthoLattice& l) {
  LatticeLawReport report;
  auto fail = [&](std::string msg) {
    report.passed = false;
    if (report.violations.size() < 32) report.violations.push_back(std::move(msg));
  };
  const auto n = l.size();
  for (std::size_t a = 0; a < n; ++a) {
    const auto& name = l.element(a).name;
    if (!l.leq(l.bottom(), a) || !l.leq(a, l.top())) fail("bounds fail at " + name);
    if (l.ortho(l.ortho(a)) != a) fail("ortho not involutive at " + name);
    if (l.meet(a, l.ortho(a)) != l.bottom()) fail("E meet E-perp is not O at " + name);
    if (l.join(a, l.ortho(a)) != l.top()) fail("E join E-perp is not U at " + name);
    for (std::size_t b = 0; b < n; ++b) {
      if (l.leq(a, b) && !l.leq(l.ortho(b), l.ortho(a))) {
        fail("ortho not order-reversing at " + name + ", " + l.element(b).name);
      }
    }
  }
  report.distributive = l.is_distributive();
  report.orthomodular = l.is_orthomodular();
  return report;
}

Rational property_probability(const MuContextualStructure& s, const MeasurementRegistry& reg,
                              const StateId& state, const PropertyId& property,
                              const std::optional<std::string>& procedure) {
  if (!reg.knows_property(property)) {
    throw NoProcedure("no measurement procedure for property " + property.name);
  }
  const std::string id = procedure.value_or(reg.procedures_for(property).front());
  const auto& m = reg.procedure(id);
  if (!m.measures_property(property)) {
    throw NoProcedure("procedure " + id + " does not measure " + property.name);
  }
  Formula a = Formula::atom(PropertyInContext{property, m.context_ids().front()});
  Formula b = Formula::atom(state);
  return mean_conditional(s, reg, a, b, id);
}

ExactFamily property_probability_family(const MuContextualStructure& s,
                                        const MeasurementRegistry& reg,
                                        const PropertySpace& space) {
  ExactFamily family;
  for (const auto& st : space.states) {
    for (const auto& e : space.properties) {
      family.set(st, e, property_probability(s, reg, st, e));
    }
  }
  return family;
}

}  // namespace ctxprob
