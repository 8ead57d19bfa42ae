#include <algorithm>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "ctxprob/scenario.hpp"

namespace ctxprob {
namespace {

using Json = nlohmann::ordered_json;

struct TaskOutcome {
  bool passed = true;
  Json details = Json::object();
  std::vector<CsvTable> tables;
};

std::string fmt_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

Json kolmogorov_json(const KolmogorovReport& r) {
  Json j;
  j["passed"] = r.passed;
  j["total"] = format_rational(r.total);
  j["normalization_deficit"] = format_rational(r.normalization_deficit);
  j["families_checked"] = r.families_checked;
  j["violations"] = r.violations;
  return j;
}

struct Context {
  const Scenario& scenario;
  std::uint64_t seed;
  double tolerance;
  const Embedding* embedding;
  std::string embedding_error;
};

TaskOutcome task_check_model(const Context& ctx) {
  TaskOutcome out;
  const auto& s = *ctx.scenario.classical;
  std::mt19937_64 rng(ctx.seed);
  auto xi = check_kolmogorov(s.xi(), rng, ctx.scenario.check_model_families);
  out.passed = xi.passed;
  out.details["xi"] = kolmogorov_json(xi);

  Json procs = Json::array();
  if (ctx.scenario.registry) {
    for (const auto& m : ctx.scenario.registry->procedures()) {
      auto r = check_kolmogorov(m.contexts(), rng, ctx.scenario.check_model_families);
      out.passed = out.passed && r.passed;
      Json j = kolmogorov_json(r);
      j["procedure"] = m.id();
      procs.push_back(std::move(j));
    }
  }
  out.details["procedures"] = std::move(procs);

  Json prop = Json::array();
  for (const auto& pred : s.model().predicates()) {
    Formula b = Formula::atom(pred);
    if (!s.conditionable(b)) continue;
    auto r = check_prop_4_1(s, b, ctx.scenario.check_model_trials, rng);
    out.passed = out.passed && r.passed;
    Json j;
    j["b"] = print(b);
    j["passed"] = r.passed;
    j["normalization_checks"] = r.normalization_checks;
    j["additivity_checks"] = r.additivity_checks;
    j["inclusion_exclusion_checks"] = r.inclusion_exclusion_checks;
    j["violations"] = r.violations;
    prop.push_back(std::move(j));
  }
  out.details["conditional_measures"] = std::move(prop);
  return out;
}

TaskOutcome task_mean_prob(const Context& ctx) {
  TaskOutcome out;
  const auto& s = *ctx.scenario.classical;
  const auto& reg = *ctx.scenario.registry;
  CsvTable table{"mean-prob", {"a", "b", "procedure", "mean"}, {}};
  Json queries = Json::array();
  for (const auto& q : ctx.scenario.mean_prob) {
    Json j;
    j["a"] = print(q.a);
    j["b"] = print(q.b);
    try {
      if (q.procedure) {
        auto detail = mean_conditional_detail(s, reg, q.a, q.b, *q.procedure);
        j["procedure"] = *q.procedure;
        j["mean"] = format_rational(detail.mean);
        Json terms = Json::array();
        for (const auto& t : detail.terms) {
          Json tj;
          tj["context"] = t.context.name;
          tj["weight"] = format_rational(t.weight);
          tj["conditional"] = t.conditional ? Json(format_rational(*t.conditional)) : Json(nullptr);
          terms.push_back(std::move(tj));
        }
        j["terms"] = std::move(terms);
        j["passed"] = true;
        table.rows.push_back({j["a"], j["b"], *q.procedure, j["mean"]});
      } else {
        auto r = check_procedure_independence(s, reg, q.a, q.b, 0);
        Json means = Json::array();
        for (const auto& [id, mean] : r.means) {
          means.push_back(Json{{"procedure", id}, {"mean", format_rational(mean)}});
          table.rows.push_back({print(q.a), print(q.b), id, format_rational(mean)});
        }
        j["means"] = std::move(means);
        j["max_deviation"] = format_rational(r.max_deviation);
        j["vacuous"] = r.vacuous;
        j["errors"] = r.errors;
        j["passed"] = r.passed && !r.means.empty();
      }
    } catch (const Error& e) {
      j["error"] = e.what();
      j["passed"] = false;
    }
    out.passed = out.passed && j["passed"].get<bool>();
    queries.push_back(std::move(j));
  }
  out.details["queries"] = std::move(queries);
  out.tables.push_back(std::move(table));
  return out;
}

TaskOutcome task_born(const Context& ctx) {
  TaskOutcome out;
  const auto& model = *ctx.scenario.quantum;
  CsvTable table{"born", {"state", "property", "born"}, {}};
  Json rows = Json::array();
  double worst_normalization = 0.0;
  const auto identity = Projector::identity(model.dim());
  for (const auto& [sid, rho] : model.states()) {
    worst_normalization = std::max(worst_normalization, std::abs(born(rho, identity) - 1.0));
    for (const auto& [pid, proj] : model.properties()) {
      const double value = born(rho, proj);
      rows.push_back(Json{{"state", sid.name},
                          {"property", pid.name},
                          {"born", value},
                          {"born_exact", format_rational(exact_born(value))}});
      table.rows.push_back({sid.name, pid.name, fmt_double(value)});
    }
  }
  out.passed = worst_normalization <= ctx.tolerance;
  out.details["dim"] = model.dim();
  out.details["normalization_max_error"] = worst_normalization;
  out.details["values"] = std::move(rows);
  out.tables.push_back(std::move(table));
  return out;
}

TaskOutcome task_embed(const Context& ctx) {
  TaskOutcome out;
  const auto& spec = *ctx.scenario.embedding;
  out.details["scheme"] = to_string(spec.scheme.kind);
  out.details["contexts"] = spec.scheme.context_count;
  out.details["resolution"] = spec.scheme.resolution;
  if (ctx.embedding == nullptr) {
    out.passed = false;
    out.details["error"] = ctx.embedding_error;
    return out;
  }
  const auto& e = *ctx.embedding;
  out.details["universe_size"] = e.structure.model().size();
  out.details["predicate_count"] = e.structure.model().predicates().size();
  Json procs = Json::array();
  for (const auto& m : e.registry.procedures()) {
    Json measures = Json::array();
    for (const auto& p : m.measures()) measures.push_back(p.name);
    Json contexts = Json::object();
    for (std::size_t i = 0; i < m.contexts().size(); ++i) {
      contexts[m.contexts().label(i)] = format_rational(m.contexts().weight(i));
    }
    procs.push_back(Json{{"id", m.id()}, {"measures", measures}, {"contexts", contexts}});
  }
  out.details["procedures"] = std::move(procs);
  Json approx = Json::array();
  for (const auto& a : e.approximations) {
    approx.push_back(Json{{"state", a.state.name},
                          {"property", a.property.name},
                          {"born", format_rational(a.born)},
                          {"realized", format_rational(a.realized)},
                          {"bias_bound", format_rational(a.bias_bound)}});
  }
  out.details["approximations"] = std::move(approx);
  return out;
}

// An explicit tolerance wins; otherwise the largest recorded rounding bias.
Rational embed_tolerance(const EmbeddingSpec& spec, const Embedding* e) {
  if (spec.tolerance) return *spec.tolerance;
  Rational tol(0);
  if (e != nullptr) {
    for (const auto& a : e->approximations) tol = std::max(tol, a.bias_bound);
  }
  return tol;
}

TaskOutcome task_verify(const Context& ctx) {
  TaskOutcome out;
  if (ctx.embedding == nullptr) {
    out.passed = false;
    out.details["error"] = ctx.embedding_error;
    return out;
  }
  const Rational tol = embed_tolerance(*ctx.scenario.embedding, ctx.embedding);
  auto r = verify_embedding(*ctx.embedding, tol);
  out.passed = r.passed;
  out.details["tolerance"] = format_rational(tol);
  out.details["max_deviation"] = format_rational(r.max_deviation);
  out.details["max_deviation_float"] = to_double(r.max_deviation);
  CsvTable table{"verify", {"state", "property", "classical_mean", "born", "deviation"}, {}};
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"state", row.state.name},
                        {"property", row.property.name},
                        {"classical_mean", format_rational(row.classical_mean)},
                        {"born", row.born},
                        {"born_exact", format_rational(row.born_exact)},
                        {"deviation", format_rational(row.deviation)}});
    table.rows.push_back({row.state.name, row.property.name, format_rational(row.classical_mean),
                          fmt_double(row.born), format_rational(row.deviation)});
  }
  out.details["rows"] = std::move(rows);
  out.details["violations"] = r.violations;
  out.tables.push_back(std::move(table));
  return out;
}

TaskOutcome task_witness(const Context& ctx) {
  TaskOutcome out;
  const auto& model = *ctx.scenario.quantum;
  const auto lattice = generate_projector_lattice(model);
  const auto family = born_family(model, lattice);
  out.details["lattice_size"] = lattice.lattice.size();
  out.details["distributive"] = lattice.lattice.is_distributive();

  auto witness_json = [&](const StateId& s, const PropertyId& f, Json& j) -> bool {
    auto w = classical_conditioning_failure_witness(lattice.lattice, family, s, f, ctx.tolerance);
    j["state"] = s.name;
    j["condition"] = f.name;
    j["found"] = w.has_value();
    if (w) {
      j["first"] = w->first.name;
      j["second"] = w->second.name;
      j["joined_ratio"] = w->joined_ratio;
      j["summed_ratio"] = w->summed_ratio;
      j["deviation"] = std::abs(w->joined_ratio - w->summed_ratio);
    }
    return w.has_value();
  };

  Json results = Json::array();
  if (ctx.scenario.witness.empty()) {
    bool any = false;
    for (const auto& [sid, _] : model.states()) {
      for (const auto& [pid, __] : model.properties()) {
        if (family.value(sid, pid) <= ctx.tolerance) continue;
        Json j;
        any = witness_json(sid, pid, j) || any;
        results.push_back(std::move(j));
      }
    }
    out.passed = any;
  } else {
    for (const auto& q : ctx.scenario.witness) {
      Json j;
      j["expect"] = q.expect;
      try {
        const bool found = witness_json(q.state, q.condition, j);
        j["passed"] = found == q.expect;
      } catch (const Error& e) {
        j["error"] = e.what();
        j["passed"] = false;
      }
      out.passed = out.passed && j["passed"].get<bool>();
      results.push_back(std::move(j));
    }
  }
  out.details["witnesses"] = std::move(results);
  return out;
}

TaskOutcome task_lattice(const Context& ctx) {
  TaskOutcome out;
  const auto& model = *ctx.scenario.quantum;
  const auto lattice = generate_projector_lattice(model);
  const auto laws = verify_lattice_laws(lattice.lattice);
  Json elements = Json::array();
  for (std::size_t i = 0; i < lattice.lattice.size(); ++i) {
    elements.push_back(Json{{"id", lattice.lattice.element(i).name},
                            {"rank", lattice.projectors[i].rank()},
                            {"ortho", lattice.lattice.element(lattice.lattice.ortho(i)).name}});
  }
  out.details["elements"] = std::move(elements);
  out.details["laws"] = Json{{"passed", laws.passed},
                             {"distributive", laws.distributive},
                             {"orthomodular", laws.orthomodular},
                             {"violations", laws.violations}};
  out.passed = laws.passed;

  const auto family = born_family(model, lattice);
  Json measures = Json::array();
  for (const auto& [sid, _] : model.states()) {
    auto r = is_generalized_probability_measure(lattice.lattice, family, sid, ctx.tolerance);
    Json violations = Json::array();
    for (const auto& v : r.violations) {
      Json fam = Json::array();
      for (const auto& e : v.family) fam.push_back(e.name);
      violations.push_back(Json{{"family", fam}, {"join", v.join_value}, {"sum", v.summed}});
    }
    measures.push_back(Json{{"state", sid.name},
                            {"passed", r.passed},
                            {"top", r.top_value},
                            {"families_checked", r.families_checked},
                            {"violations", violations}});
    out.passed = out.passed && r.passed;
  }
  out.details["generalized_measures"] = std::move(measures);

  const auto sample = default_state_sample(model, ctx.seed, ctx.scenario.lattice_random_states);
  const auto ordering = ordering_family_check(model, sample);
  Json counter = Json::array();
  for (const auto& c : ordering.counterexamples) {
    counter.push_back(Json{{"lhs", c.lhs.name},
                           {"rhs", c.rhs.name},
                           {"born_order", c.born_order},
                           {"projector_order", c.projector_order},
                           {"separating_state", c.separating_state ? Json(*c.separating_state)
                                                                   : Json(nullptr)}});
  }
  out.details["ordering"] = Json{{"passed", ordering.passed},
                                 {"low_confidence", ordering.low_confidence},
                                 {"pairs_checked", ordering.pairs_checked},
                                 {"states_used", ordering.states_used},
                                 {"counterexamples", counter}};
  out.passed = out.passed && ordering.passed;
  return out;
}

TaskOutcome run_task(const std::string& name, const Context& ctx) {
  static const std::map<std::string, std::function<TaskOutcome(const Context&)>> table = {
      {"check-model", task_check_model},
      {"mean-prob", task_mean_prob},
      {"born", task_born},
      {"embed", task_embed},
      {"verify", task_verify},
      {"witness-nonclassicality", task_witness},
      {"lattice-report", task_lattice}};
  try {
    return table.at(name)(ctx);
  } catch (const Error& e) {
    TaskOutcome out;
    out.passed = false;
    out.details["error"] = e.what();
    return out;
  }
}

}  // namespace

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  std::vector<std::string> tasks;
  for (const auto& t : scenario.tasks) {
    if (options.task_filter.empty() ||
        std::find(options.task_filter.begin(), options.task_filter.end(), t) !=
            options.task_filter.end()) {
      tasks.push_back(t);
    }
  }

  std::optional<Embedding> embedding;
  std::string embedding_error;
  const bool wants_embedding = std::any_of(tasks.begin(), tasks.end(), [](const std::string& t) {
    return t == "embed" || t == "verify";
  });
  if (wants_embedding) {
    const auto& spec = *scenario.embedding;
    try {
      embedding = build_embedding(*scenario.quantum, spec.groups, spec.scheme, spec.options);
    } catch (const Error& e) {
      embedding_error = e.what();
    }
  }

  Context ctx{scenario, options.seed.value_or(scenario.seed),
              options.tolerance.value_or(scenario.float_tolerance),
              embedding ? &*embedding : nullptr, embedding_error};

  std::vector<TaskOutcome> outcomes;
  if (options.parallel) {
    std::vector<std::future<TaskOutcome>> futures;
    for (const auto& t : tasks) {
      futures.push_back(std::async(std::launch::async, [&ctx, t] { return run_task(t, ctx); }));
    }
    for (auto& f : futures) outcomes.push_back(f.get());
  } else {
    for (const auto& t : tasks) outcomes.push_back(run_task(t, ctx));
  }

  RunResult result;
  Json report;
  report["schema"] = kReportSchema;
  report["tool"] = Json{{"name", "ctxprob"}, {"version", kToolVersion}};
  report["scenario"] = scenario.name;
  report["seed"] = ctx.seed;
  Json tolerances;
  tolerances["float"] = ctx.tolerance;
  if (scenario.embedding) {
    tolerances["embed"] = format_rational(embed_tolerance(*scenario.embedding, ctx.embedding));
  }
  report["tolerances"] = std::move(tolerances);
  Json task_reports = Json::array();
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    Json t;
    t["name"] = tasks[i];
    t["passed"] = outcomes[i].passed;
    for (auto& [k, v] : outcomes[i].details.items()) t[k] = v;
    task_reports.push_back(std::move(t));
    if (!outcomes[i].passed) {
      result.passed = false;
      result.failed_tasks.push_back(tasks[i]);
    }
    for (auto& table : outcomes[i].tables) result.tables.push_back(std::move(table));
  }
  report["passed"] = result.passed;
  report["tasks"] = std::move(task_reports);
  result.report = std::move(report);
  return result;
}

std::string render_csv(const CsvTable& table) {
  auto cell = [](const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string quoted = "\"";
    for (char c : v) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + "\"";
  };
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out += ',';
      out += cell(cells[i]);
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return out;
}

int run_cli(const std::filesystem::path& scenario_path, const std::filesystem::path& output_dir,
            const RunOptions& options, std::ostream& out, std::ostream& err) {
  Scenario scenario;
  try {
    scenario = load_scenario(scenario_path);
  } catch (const ScenarioError& e) {
    err << "error: " << scenario_path.string();
    if (e.offset()) err << ": byte " << *e.offset();
    err << ": " << e.what() << "\n";
    return 2;
  }
  for (const auto& t : options.task_filter) {
    const auto& known = known_tasks();
    if (std::find(known.begin(), known.end(), t) == known.end()) {
      err << "error: unknown task '" << t << "'\n";
      return 2;
    }
  }

  RunResult result = run_scenario(scenario, options);

  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) {
    err << "error: cannot create " << output_dir.string() << ": " << ec.message() << "\n";
    return 2;
  }
  auto write = [&](const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    f << content;
    if (!f) {
      err << "error: cannot write " << path.string() << "\n";
      return false;
    }
    return true;
  };
  if (options.format != ReportFormat::kCsv) {
    if (!write(output_dir / (scenario.name + ".report.json"), result.report.dump(2) + "\n")) return 2;
  }
  if (options.format != ReportFormat::kJson) {
    for (const auto& table : result.tables) {
      if (!write(output_dir / (scenario.name + "." + table.name + ".csv"), render_csv(table))) {
        return 2;
      }
    }
  }

  if (!options.quiet) {
    for (const auto& t : result.report["tasks"]) {
      out << std::left << std::setw(26) << t["name"].get<std::string>()
          << (t["passed"].get<bool>() ? "PASS" : "FAIL") << "\n";
    }
  }
  if (!result.passed) {
    err << "failed tasks:";
    for (const auto& t : result.failed_tasks) err << " " << t;
    err << "\n";
    return 1;
  }
  return 0;
}

}  // namespace ctxprob
