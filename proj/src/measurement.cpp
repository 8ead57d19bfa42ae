#include "ctxprob/measurement.hpp"

#include <algorithm>
#include <set>

#include "ctxprob/errors.hpp"

namespace ctxprob {

MeasurementProcedure::MeasurementProcedure(std::string id, std::vector<PropertyId> measures,
                                           FiniteProbabilitySpace contexts)
    : id_(std::move(id)), measures_(std::move(measures)), contexts_(std::move(contexts)) {
  std::sort(measures_.begin(), measures_.end());
  measures_.erase(std::unique(measures_.begin(), measures_.end()), measures_.end());
  if (id_.empty()) throw InvalidRegistry("procedure id must be nonempty");
  if (measures_.empty()) throw InvalidRegistry("procedure " + id_ + " measures nothing");
}

std::vector<ContextId> MeasurementProcedure::context_ids() const {
  std::vector<ContextId> out;
  out.reserve(contexts_.size());
  for (const auto& l : contexts_.labels()) out.push_back(ContextId{l});
  return out;
}

bool MeasurementProcedure::measures_property(const PropertyId& e) const {
  return std::binary_search(measures_.begin(), measures_.end(), e);
}

bool MeasurementProcedure::has_context(const ContextId& c) const {
  return contexts_.index_of(c.name).has_value();
}

const Rational& MeasurementProcedure::weight(const ContextId& c) const {
  auto idx = contexts_.index_of(c.name);
  if (!idx) throw UnknownContext("procedure " + id_ + " has no context " + c.name);
  return contexts_.weight(*idx);
}

MeasurementRegistry MeasurementRegistry::create(std::vector<MeasurementProcedure> procedures,
                                                const std::vector<PropertyId>& declared) {
  MeasurementRegistry reg;
  std::set<std::string> ids;
  for (const auto& m : procedures) {
    if (!ids.insert(m.id()).second) throw InvalidRegistry("duplicate procedure id " + m.id());
    for (const auto& e : m.measures()) reg.by_property_[e].push_back(m.id());
  }
  for (const auto& e : declared) {
    if (reg.by_property_.count(e) == 0) {
      throw InvalidRegistry("property " + e.name + " has no measurement procedure");
    }
  }
  reg.procedures_ = std::move(procedures);
  return reg;
}

const MeasurementProcedure& MeasurementRegistry::procedure(const std::string& id) const {
  for (const auto& m : procedures_) {
    if (m.id() == id) return m;
  }
  throw NoProcedure("no procedure with id " + id);
}

const std::vector<std::string>& MeasurementRegistry::procedures_for(const PropertyId& e) const {
  auto it = by_property_.find(e);
  if (it == by_property_.end()) throw UnknownProperty("unknown property " + e.name);
  return it->second;
}

bool MeasurementRegistry::knows_context(const ContextId& c) const {
  return std::any_of(procedures_.begin(), procedures_.end(),
                     [&](const MeasurementProcedure& m) { return m.has_context(c); });
}

std::vector<PropertyId> MeasurementRegistry::properties() const {
  std::vector<PropertyId> out;
  for (const auto& [e, _] : by_property_) out.push_back(e);
  return out;
}

namespace {

// ∩ 𝓜_E in registry order.
std::vector<std::string> common_procedures(const MeasurementRegistry& reg,
                                           const std::vector<PropertyId>& props) {
  std::vector<std::string> out;
  for (const auto& m : reg.procedures()) {
    bool all = std::all_of(props.begin(), props.end(),
                           [&](const PropertyId& e) { return m.measures_property(e); });
    if (all) out.push_back(m.id());
  }
  return out;
}

}  // namespace

bool compatible(const MeasurementRegistry& reg, const std::vector<PropertyId>& props) {
  if (props.empty()) throw std::invalid_argument("compatibility needs at least one property");
  for (const auto& e : props) reg.procedures_for(e);
  return !common_procedures(reg, props).empty();
}

std::vector<PropertyId> properties_of(const Formula& f) {
  std::vector<PropertyId> out;
  for (const auto& atom : atoms_of(f)) {
    if (const auto* p = std::get_if<PropertyInContext>(&atom)) {
      if (std::find(out.begin(), out.end(), p->property) == out.end()) {
        out.push_back(p->property);
      }
    }
  }
  return out;
}

std::vector<ContextId> contexts_of(const Formula& f) {
  std::vector<ContextId> out;
  for (const auto& atom : atoms_of(f)) {
    if (const auto* p = std::get_if<PropertyInContext>(&atom)) {
      if (std::find(out.begin(), out.end(), p->context) == out.end()) {
        out.push_back(p->context);
      }
    }
  }
  return out;
}

std::optional<TestabilityWitness> is_testable(const MeasurementRegistry& reg, const Formula& f) {
  const auto props = properties_of(f);
  const auto contexts = contexts_of(f);
  if (props.empty()) {
    TestabilityWitness w;
    for (const auto& m : reg.procedures()) w.procedures.push_back(m.id());
    return w;
  }
  for (const auto& e : props) reg.procedures_for(e);
  for (const auto& c : contexts) {
    if (!reg.knows_context(c)) throw UnknownContext("unknown context " + c.name);
  }
  if (contexts.size() != 1) return std::nullopt;
  TestabilityWitness w;
  w.context = contexts.front();
  for (const auto& id : common_procedures(reg, props)) {
    if (reg.procedure(id).has_context(*w.context)) w.procedures.push_back(id);
  }
  if (w.procedures.empty()) return std::nullopt;
  return w;
}

MeanConditional mean_conditional_detail(const MuContextualStructure& s,
                                        const MeasurementRegistry& reg, const Formula& a,
                                        const Formula& b, const std::string& procedure) {
  auto witness = is_testable(reg, a & b);
  if (!witness || std::find(witness->procedures.begin(), witness->procedures.end(),
                            procedure) == witness->procedures.end()) {
    throw NotJointlyTestable(print(a) + " and " + print(b) +
                             " are not jointly testable with procedure " + procedure);
  }
  const auto& m = reg.procedure(procedure);
  MeanConditional out;
  out.mean = 0;
  for (const auto& c : m.context_ids()) {
    ContextTerm term{c, m.weight(c), std::nullopt};
    if (term.weight != 0) {
      Formula ac = witness->context ? reindex(a, *witness->context, c) : a;
      Formula bc = witness->context ? reindex(b, *witness->context, c) : b;
      if (!s.conditionable(bc)) {
        throw ZeroConditioningEvent("in context " + c.name + " of " + procedure + ", " +
                                    print(bc) + " has measure 0");
      }
      term.conditional = mu_conditional(s, ac, bc);
      out.mean += term.weight * *term.conditional;
    }
    out.terms.push_back(std::move(term));
  }
  return out;
}

Rational mean_conditional(const MuContextualStructure& s, const MeasurementRegistry& reg,
                          const Formula& a, const Formula& b, const std::string& procedure) {
  return mean_conditional_detail(s, reg, a, b, procedure).mean;
}

ProcedureIndependenceReport check_procedure_independence(const MuContextualStructure& s,
                                                         const MeasurementRegistry& reg,
                                                         const Formula& a, const Formula& b,
                                                         const Rational& tolerance) {
  ProcedureIndependenceReport report;
  report.max_deviation = 0;
  const Formula joint = a & b;
  const auto props = properties_of(joint);
  const auto contexts = contexts_of(joint);
  if (contexts.size() > 1) {
    report.passed = false;
    report.errors.push_back("formulas mix context indices; not jointly testable");
    return report;
  }
  std::vector<std::string> admissible;
  if (props.empty()) {
    for (const auto& m : reg.procedures()) admissible.push_back(m.id());
  } else {
    for (const auto& e : props) {
      if (!reg.knows_property(e)) {
        report.passed = false;
        report.errors.push_back("unknown property " + e.name);
        return report;
      }
    }
    admissible = common_procedures(reg, props);
  }

  for (const auto& id : admissible) {
    const auto& m = reg.procedure(id);
    Formula am = a;
    Formula bm = b;
    if (!contexts.empty()) {
      const ContextId target = m.context_ids().front();
      am = reindex(a, contexts.front(), target);
      bm = reindex(b, contexts.front(), target);
    }
    try {
      report.means.emplace_back(id, mean_conditional(s, reg, am, bm, id));
    } catch (const Error& e) {
      report.passed = false;
      report.errors.push_back(id + ": " + e.what());
    }
  }
  report.vacuous = report.means.size() < 2;
  if (!report.means.empty()) {
    auto [lo, hi] = std::minmax_element(
        report.means.begin(), report.means.end(),
        [](const auto& x, const auto& y) { return x.second < y.second; });
    report.max_deviation = hi->second - lo->second;
  }
  if (report.max_deviation > tolerance) report.passed = false;
  return report;
}

}  // namespace ctxprob
