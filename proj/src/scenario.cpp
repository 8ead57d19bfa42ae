#include "ctxprob/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ctxprob {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& where, const std::string& message) {
  throw ScenarioError(where + ": " + message, std::nullopt, where);
}

const Json& need(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) bad(where, std::string("missing '") + key + "'");
  return obj.at(key);
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string");
  return j.get<std::string>();
}

Rational as_rational(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (!j.is_string()) bad(where, "expected a rational written as \"p/q\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    bad(where, e.what());
  }
}

std::size_t as_count(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() || j.get<std::uint64_t>() == 0) {
    bad(where, "expected a positive integer");
  }
  return j.get<std::size_t>();
}

Formula as_formula(const Json& j, const std::string& where) {
  const std::string text = as_string(j, where);
  try {
    return parse_formula(text);
  } catch (const SyntaxError& e) {
    throw ScenarioError(where + ": " + e.what(), e.offset(), where);
  }
}

std::complex<double> as_complex(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  const std::string text = as_string(j, where);
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      double re = std::stod(text, &used);
      if (used != text.size()) bad(where, "malformed complex entry '" + text + "'");
      return {re, 0.0};
    }
    const std::string re_text = text.substr(0, comma);
    const std::string im_text = text.substr(comma + 1);
    double re = std::stod(re_text, &used);
    if (used != re_text.size()) bad(where, "malformed complex entry '" + text + "'");
    double im = std::stod(im_text, &used);
    if (used != im_text.size()) bad(where, "malformed complex entry '" + text + "'");
    return {re, im};
  } catch (const std::logic_error&) {
    bad(where, "malformed complex entry '" + text + "'");
  }
}

ComplexMatrix as_matrix(const Json& j, Eigen::Index dim, const std::string& where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim) {
    bad(where, "expected " + std::to_string(dim) + " rows");
  }
  ComplexMatrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    const std::string rw = where + "/" + std::to_string(r);
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
      bad(rw, "expected " + std::to_string(dim) + " entries");
    }
    for (Eigen::Index c = 0; c < dim; ++c) {
      m(r, c) = as_complex(row[static_cast<std::size_t>(c)], rw + "/" + std::to_string(c));
    }
  }
  return m;
}

ComplexVector as_vector(const Json& j, Eigen::Index dim, const std::string& where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim) {
    bad(where, "expected " + std::to_string(dim) + " entries");
  }
  ComplexVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    v(i) = as_complex(j[static_cast<std::size_t>(i)], where + "/" + std::to_string(i));
  }
  return v;
}

MuContextualStructure parse_classical(const Json& j, const std::string& where) {
  const auto& universe_json = need(j, "universe", where);
  if (!universe_json.is_array() || universe_json.empty()) {
    bad(where + "/universe", "expected a nonempty list of labels");
  }
  std::vector<std::string> universe;
  for (std::size_t i = 0; i < universe_json.size(); ++i) {
    universe.push_back(as_string(universe_json[i], where + "/universe/" + std::to_string(i)));
  }

  std::vector<Rational> weights;
  const std::string xw = where + "/xi";
  const Json xi = j.contains("xi") ? j.at("xi") : Json("uniform");
  if (xi.is_string() && xi.get<std::string>() == "uniform") {
    weights.assign(universe.size(), Rational(1, static_cast<long long>(universe.size())));
  } else if (xi.is_object()) {
    for (const auto& u : universe) {
      if (!xi.contains(u)) bad(xw, "no weight for '" + u + "'");
      weights.push_back(as_rational(xi.at(u), xw + "/" + u));
    }
    if (xi.size() != universe.size()) bad(xw, "weights name points outside the universe");
  } else {
    bad(xw, "expected \"uniform\" or an object of \"p/q\" weights");
  }

  std::vector<std::pair<PredicateId, Event>> extensions;
  const auto& ext = need(j, "extensions", where);
  if (!ext.is_object()) bad(where + "/extensions", "expected an object");
  try {
    auto space = FiniteProbabilitySpace::create(universe, weights);
    for (const auto& [key, members] : ext.items()) {
      const std::string ew = where + "/extensions/" + key;
      Formula atom = as_formula(Json(key), ew);
      if (atom.kind() != Formula::Kind::kAtom) bad(ew, "extension keys must be single atoms");
      if (!members.is_array()) bad(ew, "expected a list of universe labels");
      std::vector<std::string> labels;
      for (const auto& m : members) labels.push_back(as_string(m, ew));
      extensions.emplace_back(atom.predicate(), space.event_of(labels));
    }
    return MuContextualStructure(Model::create(universe, std::move(extensions)), std::move(space));
  } catch (const ScenarioError&) {
    throw;
  } catch (const Error& e) {
    bad(where, e.what());
  }
}

MeasurementRegistry parse_registry(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected a list of procedures");
  std::vector<MeasurementProcedure> procs;
  try {
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string pw = where + "/" + std::to_string(i);
      const auto& p = j[i];
      std::string id = as_string(need(p, "id", pw), pw + "/id");
      std::vector<PropertyId> measures;
      const auto& m = need(p, "measures", pw);
      if (!m.is_array()) bad(pw + "/measures", "expected a list");
      for (const auto& e : m) measures.push_back(PropertyId{as_string(e, pw + "/measures")});
      const auto& ctx = need(p, "contexts", pw);
      if (!ctx.is_object() || ctx.empty()) bad(pw + "/contexts", "expected a nonempty object");
      std::vector<std::string> labels;
      std::vector<Rational> weights;
      for (const auto& [c, w] : ctx.items()) {
        labels.push_back(c);
        weights.push_back(as_rational(w, pw + "/contexts/" + c));
      }
      procs.emplace_back(std::move(id), std::move(measures),
                         FiniteProbabilitySpace::create(std::move(labels), std::move(weights)));
    }
    return MeasurementRegistry::create(std::move(procs));
  } catch (const ScenarioError&) {
    throw;
  } catch (const Error& e) {
    bad(where, e.what());
  }
}

QuantumModel parse_quantum(const Json& j, const std::string& where) {
  const auto& dim_json = need(j, "dim", where);
  if (!dim_json.is_number_unsigned()) bad(where + "/dim", "expected a positive integer");
  const auto dim = static_cast<Eigen::Index>(dim_json.get<std::uint64_t>());
  try {
    QuantumModel model(dim);
    const auto& states = need(j, "states", where);
    if (!states.is_array()) bad(where + "/states", "expected a list");
    for (std::size_t i = 0; i < states.size(); ++i) {
      const std::string sw = where + "/states/" + std::to_string(i);
      const auto& s = states[i];
      StateId id{as_string(need(s, "id", sw), sw + "/id")};
      if (s.contains("preset")) {
        if (dim != 2) bad(sw, "presets are qubit-only");
        model.add_state(id, preset_state(as_string(s.at("preset"), sw + "/preset")));
      } else if (s.contains("vector")) {
        model.add_state(id, DensityOperator::pure(as_vector(s.at("vector"), dim, sw + "/vector")));
      } else if (s.contains("matrix")) {
        model.add_state(id, DensityOperator::create(as_matrix(s.at("matrix"), dim, sw + "/matrix")));
      } else {
        bad(sw, "state needs 'preset', 'vector' or 'matrix'");
      }
    }
    const auto& props = need(j, "properties", where);
    if (!props.is_array()) bad(where + "/properties", "expected a list");
    for (std::size_t i = 0; i < props.size(); ++i) {
      const std::string pw = where + "/properties/" + std::to_string(i);
      const auto& p = props[i];
      PropertyId id{as_string(need(p, "id", pw), pw + "/id")};
      if (p.contains("preset")) {
        if (dim != 2) bad(pw, "presets are qubit-only");
        model.add_property(id, preset_projector(as_string(p.at("preset"), pw + "/preset")));
      } else if (p.contains("bloch")) {
        const auto& b = p.at("bloch");
        if (dim != 2 || !b.is_array() || b.size() != 3) bad(pw, "bloch needs dim 2 and 3 numbers");
        model.add_property(id, Projector::bloch(b[0].get<double>(), b[1].get<double>(),
                                                b[2].get<double>()));
      } else if (p.contains("vector")) {
        model.add_property(id, Projector::onto(as_vector(p.at("vector"), dim, pw + "/vector")));
      } else if (p.contains("matrix")) {
        model.add_property(id, Projector::create(as_matrix(p.at("matrix"), dim, pw + "/matrix")));
      } else {
        bad(pw, "property needs 'preset', 'bloch', 'vector' or 'matrix'");
      }
    }
    return model;
  } catch (const ScenarioError&) {
    throw;
  } catch (const Error& e) {
    bad(where, e.what());
  }
}

EmbeddingSpec parse_embedding(const Json& j, const std::string& where) {
  EmbeddingSpec spec;
  const auto& groups = need(j, "groups", where);
  if (!groups.is_array() || groups.empty()) bad(where + "/groups", "expected a nonempty list");
  for (const auto& g : groups) {
    if (!g.is_array()) bad(where + "/groups", "each group is a list of property ids");
    std::vector<PropertyId> group;
    for (const auto& e : g) group.push_back(PropertyId{as_string(e, where + "/groups")});
    spec.groups.push_back(std::move(group));
  }
  try {
    spec.scheme.kind = parse_scheme_kind(as_string(need(j, "scheme", where), where + "/scheme"));
  } catch (const std::invalid_argument& e) {
    bad(where + "/scheme", e.what());
  }
  if (j.contains("contexts")) spec.scheme.context_count = as_count(j.at("contexts"), where + "/contexts");
  if (j.contains("resolution")) {
    spec.scheme.resolution = as_count(j.at("resolution"), where + "/resolution");
  }
  if (j.contains("require_exact")) spec.options.require_exact = j.at("require_exact").get<bool>();
  if (j.contains("state_weights")) {
    for (const auto& [s, w] : j.at("state_weights").items()) {
      spec.options.state_weights[StateId{s}] = as_rational(w, where + "/state_weights/" + s);
    }
  }
  if (j.contains("tolerance")) spec.tolerance = as_rational(j.at("tolerance"), where + "/tolerance");
  return spec;
}

}  // namespace

ScenarioError::ScenarioError(std::string message, std::optional<std::size_t> offset,
                             std::string where)
    : Error(std::move(message)), offset_(offset), where_(std::move(where)) {}

const std::vector<std::string>& known_tasks() {
  static const std::vector<std::string> tasks = {
      "check-model", "mean-prob", "born", "embed", "verify", "witness-nonclassicality",
      "lattice-report"};
  return tasks;
}

namespace {

Scenario parse_root(const Json& root);

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError(std::string("JSON ") + e.what(), e.byte > 0 ? e.byte - 1 : 0);
  }
  try {
    return parse_root(root);
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(std::string("wrong value type: ") + e.what());
  }
}

namespace {

Scenario parse_root(const Json& root) {
  if (!root.is_object()) bad("", "scenario must be a JSON object");
  if (root.contains("format") && root.at("format") != kScenarioFormat) {
    bad("/format", std::string("unsupported format, expected ") + kScenarioFormat);
  }

  Scenario s;
  s.name = as_string(need(root, "name", ""), "/name");
  if (root.contains("seed")) {
    if (!root.at("seed").is_number_unsigned()) bad("/seed", "expected a non-negative integer");
    s.seed = root.at("seed").get<std::uint64_t>();
  }
  if (root.contains("tolerances")) {
    const auto& t = root.at("tolerances");
    if (t.contains("float")) {
      if (!t.at("float").is_number() || t.at("float").get<double>() < 0) {
        bad("/tolerances/float", "expected a non-negative number");
      }
      s.float_tolerance = t.at("float").get<double>();
    }
  }
  const auto& tasks = need(root, "tasks", "");
  if (!tasks.is_array() || tasks.empty()) bad("/tasks", "expected a nonempty list of tasks");
  for (const auto& t : tasks) {
    std::string name = as_string(t, "/tasks");
    const auto& known = known_tasks();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      bad("/tasks", "unknown task '" + name + "'");
    }
    s.tasks.push_back(std::move(name));
  }

  if (root.contains("classical")) s.classical = parse_classical(root.at("classical"), "/classical");
  if (root.contains("registry")) s.registry = parse_registry(root.at("registry"), "/registry");
  if (root.contains("quantum")) s.quantum = parse_quantum(root.at("quantum"), "/quantum");
  if (root.contains("embedding")) s.embedding = parse_embedding(root.at("embedding"), "/embedding");

  if (root.contains("mean_prob")) {
    const auto& q = root.at("mean_prob");
    if (!q.is_array()) bad("/mean_prob", "expected a list");
    for (std::size_t i = 0; i < q.size(); ++i) {
      const std::string qw = "/mean_prob/" + std::to_string(i);
      MeanProbQuery query{as_formula(need(q[i], "a", qw), qw + "/a"),
                          as_formula(need(q[i], "b", qw), qw + "/b"), std::nullopt};
      if (q[i].contains("procedure")) {
        query.procedure = as_string(q[i].at("procedure"), qw + "/procedure");
      }
      s.mean_prob.push_back(std::move(query));
    }
  }
  if (root.contains("witness")) {
    const auto& q = root.at("witness");
    if (!q.is_array()) bad("/witness", "expected a list");
    for (std::size_t i = 0; i < q.size(); ++i) {
      const std::string qw = "/witness/" + std::to_string(i);
      WitnessQuery w{StateId{as_string(need(q[i], "state", qw), qw + "/state")},
                     PropertyId{as_string(need(q[i], "condition", qw), qw + "/condition")}, true};
      if (q[i].contains("expect")) w.expect = q[i].at("expect").get<bool>();
      s.witness.push_back(std::move(w));
    }
  }
  if (root.contains("check_model")) {
    const auto& c = root.at("check_model");
    if (c.contains("trials")) s.check_model_trials = as_count(c.at("trials"), "/check_model/trials");
    if (c.contains("families")) {
      s.check_model_families = as_count(c.at("families"), "/check_model/families");
    }
  }
  if (root.contains("lattice") && root.at("lattice").contains("random_states")) {
    s.lattice_random_states = as_count(root.at("lattice").at("random_states"),
                                       "/lattice/random_states");
  }

  // Every task must find the sections it reads.
  for (const auto& t : s.tasks) {
    if (t == "check-model" && !s.classical) bad("/tasks", "check-model needs a classical section");
    if (t == "mean-prob" && (!s.classical || !s.registry || s.mean_prob.empty())) {
      bad("/tasks", "mean-prob needs classical, registry and mean_prob sections");
    }
    if ((t == "born" || t == "lattice-report" || t == "witness-nonclassicality") && !s.quantum) {
      bad("/tasks", t + " needs a quantum section");
    }
    if ((t == "embed" || t == "verify") && (!s.quantum || !s.embedding)) {
      bad("/tasks", t + " needs quantum and embedding sections");
    }
  }
  return s;
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot read scenario file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

}  // namespace ctxprob
