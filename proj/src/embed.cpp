#include "ctxprob/embed.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "ctxprob/errors.hpp"

namespace ctxprob {
namespace {

using boost::multiprecision::cpp_int;

cpp_int floor_of(const Rational& x) {
  cpp_int q = numerator(x) / denominator(x);
  if (numerator(x) % denominator(x) != 0 && x < 0) q -= 1;
  return q;
}

std::size_t nearest_count(const Rational& scaled) {
  return floor_of(scaled + Rational(1, 2)).convert_to<std::size_t>();
}

std::string context_name(std::size_t group, std::size_t j) {
  return "M" + std::to_string(group + 1) + ".c" + std::to_string(j + 1);
}

// Per-state thresholds for one property: how many of the R copies of state S
// carry E in context j.
struct Thresholds {
  std::vector<std::vector<std::size_t>> copies;  // [state][context]
};

}  // namespace

std::string to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kOntic:
      return "ontic";
    case SchemeKind::kDeterministicContext:
      return "deterministic-context";
    case SchemeKind::kHybrid:
      return "hybrid";
  }
  return "?";
}

SchemeKind parse_scheme_kind(const std::string& text) {
  if (text == "ontic") return SchemeKind::kOntic;
  if (text == "deterministic-context") return SchemeKind::kDeterministicContext;
  if (text == "hybrid") return SchemeKind::kHybrid;
  throw std::invalid_argument("unknown embedding scheme '" + text + "'");
}

Rational exact_born(double value) { return rationalize(value, kOperatorTolerance); }

PropertySpace Embedding::property_space() const {
  PropertySpace space;
  for (const auto& [id, _] : target.states()) space.states.push_back(id);
  for (const auto& [id, _] : target.properties()) space.properties.push_back(id);
  return space;
}

Embedding build_embedding(const QuantumModel& target,
                          const std::vector<std::vector<PropertyId>>& groups,
                          const EmbeddingScheme& scheme, const EmbeddingOptions& options) {
  const std::size_t n_ctx = scheme.context_count;
  const std::size_t res = scheme.resolution;
  if (n_ctx < 1 || res < 1) throw std::invalid_argument("embedding needs N >= 1 and R >= 1");
  if (target.states().empty()) throw InvalidModel("target has no states");

  // Validate the grouping.
  std::map<PropertyId, std::size_t> membership;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw InvalidRegistry("procedure group " + std::to_string(g + 1) + " is empty");
    for (const auto& e : groups[g]) target.property(e);
    for (std::size_t i = 0; i < groups[g].size(); ++i) {
      ++membership[groups[g][i]];
      for (std::size_t j = i + 1; j < groups[g].size(); ++j) {
        if (!kappa_compatible(target.property(groups[g][i]), target.property(groups[g][j]))) {
          throw IncompatibleGroup("group " + std::to_string(g + 1) + ": " + groups[g][i].name +
                                  " and " + groups[g][j].name + " do not commute");
        }
      }
    }
  }
  for (const auto& [id, _] : target.properties()) {
    if (membership.count(id) == 0) {
      throw InvalidRegistry("property " + id.name + " is not in any procedure group");
    }
  }

  // State prior.
  const auto& states = target.states();
  std::vector<Rational> state_weight(states.size());
  if (options.state_weights.empty()) {
    for (auto& w : state_weight) w = Rational(1, static_cast<long long>(states.size()));
  } else {
    Rational total = 0;
    for (std::size_t s = 0; s < states.size(); ++s) {
      auto it = options.state_weights.find(states[s].first);
      if (it == options.state_weights.end() || it->second <= 0) {
        throw InvalidSpace("state " + states[s].first.name + " needs a positive prior weight");
      }
      state_weight[s] = it->second;
      total += it->second;
    }
    if (total != 1) throw InvalidSpace("state prior sums to " + format_rational(total));
  }

  std::vector<Approximation> approximations;

  // Thresholds per property.
  std::map<PropertyId, Thresholds> thresholds;
  for (const auto& [pid, proj] : target.properties()) {
    const bool shared = membership[pid] > 1;
    const SchemeKind kind = shared ? SchemeKind::kOntic : scheme.kind;
    Thresholds t;
    for (const auto& [sid, rho] : states) {
      const Rational b = exact_born(born(rho, proj));
      std::vector<std::size_t> copies(n_ctx);
      Rational realized;
      Rational bias_bound;
      switch (kind) {
        case SchemeKind::kOntic: {
          const std::size_t k = nearest_count(b * Rational(res));
          std::fill(copies.begin(), copies.end(), k);
          realized = Rational(k, res);
          bias_bound = Rational(1, 2 * res);
          break;
        }
        case SchemeKind::kDeterministicContext: {
          std::size_t passed = 0;
          for (std::size_t j = 0; j < n_ctx; ++j) {
            // Ties resolve to "yes".
            const bool yes = b >= Rational(2 * j + 1, 2 * n_ctx);
            copies[j] = yes ? res : 0;
            passed += yes ? 1 : 0;
          }
          realized = Rational(passed, n_ctx);
          bias_bound = Rational(1, 2 * n_ctx);
          break;
        }
        case SchemeKind::kHybrid: {
          const std::size_t total = nearest_count(b * Rational(n_ctx * res));
          for (std::size_t j = 0; j < n_ctx; ++j) {
            copies[j] = total / n_ctx + (j < total % n_ctx ? 1 : 0);
          }
          // Shift thresholds between mirrored contexts; the sum is unchanged.
          for (std::size_t j = 0; j < n_ctx / 2; ++j) {
            const std::size_t m = n_ctx - 1 - j;
            if (copies[m] >= 1 && copies[j] + 1 <= res) {
              ++copies[j];
              --copies[m];
            }
          }
          realized = Rational(total, n_ctx * res);
          bias_bound = Rational(1, 2 * n_ctx * res);
          break;
        }
      }
      if (realized != b) {
        if (options.require_exact) {
          throw IrrationalBornValue("Born value " + format_rational(b) + " of (" + sid.name +
                                    ", " + pid.name + ") is not exact under the " +
                                    to_string(kind) + " scheme");
        }
        approximations.push_back({sid, pid, b, realized, bias_bound});
      }
      t.copies.push_back(std::move(copies));
    }
    thresholds.emplace(pid, std::move(t));
  }

  // Universe: R copies of every state.
  std::vector<std::string> universe;
  std::vector<Rational> weights;
  for (std::size_t s = 0; s < states.size(); ++s) {
    for (std::size_t r = 0; r < res; ++r) {
      universe.push_back(states[s].first.name + "#" + std::to_string(r + 1));
      weights.push_back(state_weight[s] / Rational(res));
    }
  }
  auto block_cells = [&](std::size_t s, std::size_t count) {
    std::vector<std::size_t> cells;
    for (std::size_t r = 0; r < count; ++r) cells.push_back(s * res + r);
    return cells;
  };

  std::vector<std::pair<PredicateId, Event>> extensions;
  for (std::size_t s = 0; s < states.size(); ++s) {
    extensions.emplace_back(states[s].first, Event(block_cells(s, res)));
  }
  std::vector<MeasurementProcedure> procedures;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<std::string> contexts;
    for (std::size_t j = 0; j < n_ctx; ++j) contexts.push_back(context_name(g, j));
    for (const auto& pid : groups[g]) {
      const auto& t = thresholds.at(pid);
      for (std::size_t j = 0; j < n_ctx; ++j) {
        std::vector<std::size_t> cells;
        for (std::size_t s = 0; s < states.size(); ++s) {
          auto block = block_cells(s, t.copies[s][j]);
          cells.insert(cells.end(), block.begin(), block.end());
        }
        extensions.emplace_back(PropertyInContext{pid, ContextId{contexts[j]}},
                                Event(std::move(cells)));
      }
    }
    procedures.emplace_back("M" + std::to_string(g + 1), groups[g],
                            FiniteProbabilitySpace::uniform(contexts));
  }

  // Distinct predicates may end up with equal extensions; give each later
  // duplicate a private zero-weight witness object to keep ext injective.
  std::set<Event> taken;
  for (auto& [pred, event] : extensions) {
    if (taken.insert(event).second) continue;
    universe.push_back("~" + to_string(pred));
    weights.push_back(0);
    std::vector<std::size_t> members = event.members();
    members.push_back(universe.size() - 1);
    event = Event(std::move(members));
    taken.insert(event);
  }

  std::vector<PropertyId> declared;
  for (const auto& [pid, _] : target.properties()) declared.push_back(pid);
  Model model = Model::create(universe, std::move(extensions));
  auto xi = FiniteProbabilitySpace::create(std::move(universe), std::move(weights));
  return Embedding{MuContextualStructure(std::move(model), std::move(xi)),
                   MeasurementRegistry::create(std::move(procedures), declared),
                   target,
                   scheme,
                   groups,
                   std::move(approximations)};
}

EmbeddingReport verify_embedding(const Embedding& e, const Rational& tolerance) {
  EmbeddingReport report;
  report.max_deviation = 0;
  auto fail = [&](std::string msg) {
    report.passed = false;
    report.violations.push_back(std::move(msg));
  };

  for (const auto& [sid, rho] : e.target.states()) {
    for (const auto& [pid, proj] : e.target.properties()) {
      EmbeddingRow row{sid, pid, 0, born(rho, proj), 0, 0};
      row.born_exact = exact_born(row.born);
      try {
        row.classical_mean = property_probability(e.structure, e.registry, sid, pid);
      } catch (const Error& err) {
        fail("(" + sid.name + ", " + pid.name + "): " + err.what());
        continue;
      }
      row.deviation = detail::abs_diff(row.classical_mean, row.born_exact);
      if (row.deviation > report.max_deviation) report.max_deviation = row.deviation;
      if (row.deviation > tolerance) {
        fail("(" + sid.name + ", " + pid.name + "): classical " +
             format_rational(row.classical_mean) + " vs Born " + format_rational(row.born_exact) +
             ", deviation " + format_rational(row.deviation));
      }
      report.rows.push_back(std::move(row));
    }
  }

  // Classical compatibility must imply quantum commutation.
  for (const auto& m : e.registry.procedures()) {
    const auto& props = m.measures();
    for (std::size_t i = 0; i < props.size(); ++i) {
      for (std::size_t j = i + 1; j < props.size(); ++j) {
        if (!kappa_compatible(e.target.property(props[i]), e.target.property(props[j]))) {
          fail("procedure " + m.id() + " measures non-commuting " + props[i].name + ", " +
               props[j].name);
        }
      }
    }
  }

  // Procedure independence wherever a property has several procedures.
  for (const auto& [pid, _] : e.target.properties()) {
    const auto& procs = e.registry.procedures_for(pid);
    if (procs.size() < 2) continue;
    const auto& first = e.registry.procedure(procs.front());
    Formula a = Formula::atom(PropertyInContext{pid, first.context_ids().front()});
    for (const auto& [sid, __] : e.target.states()) {
      auto r = check_procedure_independence(e.structure, e.registry, a, Formula::atom(sid), 0);
      if (!r.passed) {
        fail("procedure means for (" + sid.name + ", " + pid.name + ") differ by " +
             format_rational(r.max_deviation));
      }
    }
  }
  return report;
}

}  // namespace ctxprob
