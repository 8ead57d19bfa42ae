#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctxprob/embed.hpp"
#include "ctxprob/measurement.hpp"
#include "ctxprob/mu_prob.hpp"
#include "ctxprob/quantum.hpp"

namespace ctxprob {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kScenarioFormat = "ctxprob-scenario/1";
inline constexpr const char* kReportSchema = "ctxprob-report/1";

/// Malformed or inconsistent scenario file. `offset` is the byte offset for
/// JSON syntax errors; `where` is a JSON-pointer-like location otherwise.
class ScenarioError : public Error {
 public:
  ScenarioError(std::string message, std::optional<std::size_t> offset = std::nullopt,
                std::string where = {});
  const std::optional<std::size_t>& offset() const noexcept { return offset_; }
  const std::string& where() const noexcept { return where_; }

 private:
  std::optional<std::size_t> offset_;
  std::string where_;
};

struct MeanProbQuery {
  Formula a;
  Formula b;
  std::optional<std::string> procedure;
};

struct WitnessQuery {
  StateId state;
  PropertyId condition;
  bool expect = true;
};

struct EmbeddingSpec {
  std::vector<std::vector<PropertyId>> groups;
  EmbeddingScheme scheme;
  EmbeddingOptions options;
  std::optional<Rational> tolerance;  // defaults to the scheme's bias bound
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  double float_tolerance = kOperatorTolerance;
  std::vector<std::string> tasks;

  std::optional<MuContextualStructure> classical;
  std::optional<MeasurementRegistry> registry;
  std::optional<QuantumModel> quantum;
  std::optional<EmbeddingSpec> embedding;

  std::vector<MeanProbQuery> mean_prob;
  std::vector<WitnessQuery> witness;
  std::size_t check_model_trials = 200;
  std::size_t check_model_families = 16;
  std::size_t lattice_random_states = 32;
};

/// Task names in canonical order.
const std::vector<std::string>& known_tasks();

Scenario parse_scenario(const std::string& text);
/// Throws ScenarioError when the file cannot be read or parsed.
Scenario load_scenario(const std::filesystem::path& path);

enum class ReportFormat { kJson, kCsv, kBoth };

struct RunOptions {
  std::vector<std::string> task_filter;  // empty: run all scenario tasks
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  ReportFormat format = ReportFormat::kJson;
  bool quiet = false;
  bool parallel = false;
};

struct CsvTable {
  std::string name;  // file suffix, e.g. "verify"
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct RunResult {
  bool passed = true;
  std::vector<std::string> failed_tasks;
  nlohmann::ordered_json report;
  std::vector<CsvTable> tables;
};

/// Runs the scenario's tasks (in scenario order) and assembles the report.
/// Deterministic for a fixed scenario, options and seed.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options);

std::string render_csv(const CsvTable& table);

/// Full CLI flow: load, run, write "<name>.report.json" and CSV tables into
/// `output_dir`. Returns 0 when every task passed, 1 on task failures and 2
/// on unreadable or malformed scenarios. Diagnostics go to `err`.
int run_cli(const std::filesystem::path& scenario_path, const std::filesystem::path& output_dir,
            const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace ctxprob
