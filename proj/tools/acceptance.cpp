// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Exits 1 if any criterion fails.

#include "mcid/acceptance.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <thread>

int main(int argc, char** argv) {
  CLI::App app{"mcid acceptance suite"};
  std::string config_path;
  std::vector<int> ids;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool show_report = false;
  app.add_option("--config", config_path, "Experiment config (JSON)")->check(CLI::ExistingFile);
  app.add_option("--criterion", ids, "Criterion numbers to run (default all)")->check(CLI::Range(1, mcid::acceptance::kCriteria));
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--report", show_report, "Also print the JSON report");
  CLI11_PARSE(app, argc, argv);

  mcid::acceptance::SuiteOptions opts;
  try {
    if (!config_path.empty()) opts.config = mcid::io::read_config_file(config_path);
    opts.config.validate();
  } catch (const std::exception& e) {
    std::cerr << "acceptance: " << e.what() << "\n";
    return 2;
  }
  opts.threads = threads;
  if (ids.empty())
    for (int i = 1; i <= mcid::acceptance::kCriteria; ++i) ids.push_back(i);

  std::vector<mcid::acceptance::CriterionResult> results;
  bool all = true;
  for (int id : ids) {
    results.push_back(mcid::acceptance::run_criterion(id, opts));
    std::cout << mcid::acceptance::summary_line(results.back()) << std::endl;
    all = all && results.back().passed;
  }
  if (show_report) std::cout << mcid::acceptance::report(opts, results).dump(2) << "\n";
  return all ? 0 : 1;
}
