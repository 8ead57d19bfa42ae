#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "ctxprob/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Contextual probability toolkit"};
  app.set_version_flag("--version", std::string(ctxprob::kToolVersion));
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the tasks of a scenario file");
  std::string scenario;
  std::string output = ".";
  std::string task_list;
  ctxprob::RunOptions options;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::string format = "json";
  const std::map<std::string, ctxprob::ReportFormat> formats = {
      {"json", ctxprob::ReportFormat::kJson},
      {"csv", ctxprob::ReportFormat::kCsv},
      {"both", ctxprob::ReportFormat::kBoth}};

  run->add_option("scenario", scenario, "Scenario file")->required();
  run->add_option("-o,--output", output, "Output directory")->capture_default_str();
  auto* task_opt =
      run->add_option("--task", task_list, "Comma-separated subset of the scenario's tasks");
  auto* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");
  auto* tol_opt = run->add_option("--tolerance", tolerance, "Override the float tolerance")
                      ->check(CLI::NonNegativeNumber);
  run->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"json", "csv", "both"}))
      ->capture_default_str();
  run->add_flag("-q,--quiet", options.quiet, "Suppress the per-task summary");
  run->add_flag("--parallel", options.parallel, "Run tasks concurrently");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*task_opt) {
    std::size_t start = 0;
    while (start <= task_list.size()) {
      const auto comma = task_list.find(',', start);
      const auto end = comma == std::string::npos ? task_list.size() : comma;
      if (end > start) options.task_filter.push_back(task_list.substr(start, end - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (*seed_opt) options.seed = seed;
  if (*tol_opt) options.tolerance = tolerance;
  options.format = formats.at(format);

  try {
    return ctxprob::run_cli(scenario, output, options, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
