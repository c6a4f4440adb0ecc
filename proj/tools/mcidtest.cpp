// mcidtest: partition, test, simulate, oracle and bench front-ends.
//
// Exit codes: 0 success (or verdict Same), 1 verdict Different or a failing bench,
// 2 unreadable input or bad arguments, 3 input matrix violates the chain invariants,
// 4 internal failure.

#include "mcid/acceptance.hpp"
#include "mcid/chain.hpp"
#include "mcid/io.hpp"
#include "mcid/oracle.hpp"
#include "mcid/partition.hpp"
#include "mcid/testing.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace {

using namespace mcid;
using json = nlohmann::ordered_json;

struct Exit {
  int code;
};

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<double> eps;
  std::optional<double> beta;
  std::string config_path;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
};

io::ExperimentConfig load_config(const Globals& g) {
  io::ExperimentConfig c = g.config_path.empty() ? io::ExperimentConfig{} : io::read_config_file(g.config_path);
  if (g.seed) {
    c.master_seed = *g.seed;
  } else if (!c.master_seed_given) {
    if (const char* env = std::getenv("MCIDTEST_SEED")) {
      try {
        std::size_t used = 0;
        c.master_seed = std::stoull(env, &used, 0);
        if (env[used] != '\0') throw std::invalid_argument(env);
      } catch (const std::exception&) {
        throw io::ParseError(std::string("MCIDTEST_SEED is not an integer: '") + env + "'");
      }
    }
  }
  if (g.eps) c.eps = *g.eps;
  if (g.beta) c.beta_override = *g.beta;
  c.validate();
  return c;
}

StochasticMatrix load_chain(const std::string& path) {
  const Eigen::MatrixXd m = io::read_matrix_file(path);
  try {
    return StochasticMatrix(m);
  } catch (const InvariantError& e) {
    std::cerr << "mcidtest: " << path << ": " << e.what() << "\n";
    throw Exit{3};
  }
}

StateSubset parse_subset(const std::string& text, int n) {
  std::vector<State> members;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      std::size_t used = 0;
      members.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw io::ParseError("bad state '" + tok + "' in subset list");
    }
  }
  try {
    return StateSubset(std::move(members), n);
  } catch (const std::exception& e) {
    throw io::ParseError(std::string("subset: ") + e.what());
  }
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_partition(const Globals& g, const std::string& matrix) {
  const auto cfg = load_config(g);
  const auto p = load_chain(matrix);
  const double beta = g.beta.value_or(0.05);
  if (!(beta > 0.0 && beta < 1.0)) throw io::ParseError("beta must lie in (0, 1)");
  print(io::to_json(partition_graph(p, beta, cfg.master_seed, cfg.constants)));
  return 0;
}

int cmd_test(const Globals& g, const std::string& matrix, const std::string& trajectory) {
  const auto cfg = load_config(g);
  const auto p = load_chain(matrix);
  const Trajectory w = io::read_trajectory_file(trajectory);
  if (w.n != p.size())
    throw io::ParseError("trajectory universe " + std::to_string(w.n) + " differs from matrix size " +
                         std::to_string(p.size()));
  const Verdict v = identity_test_chain(w, p, cfg.eps, cfg.master_seed, cfg.constants);
  print(io::to_json(v));
  return v.value == Decision::Same ? 0 : 1;
}

int cmd_simulate(const Globals& g, const std::string& matrix, std::size_t length, int start, const std::string& out) {
  const auto cfg = load_config(g);
  const auto p = load_chain(matrix);
  if (start < 0 || start >= p.size()) throw io::ParseError("start state " + std::to_string(start) + " out of range");
  if (length < 1) throw io::ParseError("length must be at least 1");
  const Trajectory w = simulate_from(p, start, length, cfg.master_seed);
  if (out.empty()) {
    io::write_trajectory(std::cout, w);
  } else {
    std::ofstream f(out);
    if (!f) throw io::ParseError("cannot write '" + out + "'");
    io::write_trajectory(f, w);
  }
  return 0;
}

struct OracleArgs {
  std::string kind, matrix, other, t, s, r;
  double floor = 0.0;
};

int cmd_oracle(const OracleArgs& a) {
  const auto p = load_chain(a.matrix);
  const int n = p.size();
  json j;
  j["oracle"] = a.kind;
  if (a.kind == "sparsest-cut") {
    const auto T = parse_subset(a.t, n);
    const auto res = oracle::sparsest_cut_exact(p, StateSubset::full(n), T);
    j["cut"] = res.cut.members();
    j["value"] = res.value;
  } else if (a.kind == "cheeger") {
    const auto res = oracle::cheeger_cut_exact(p.matrix());
    j["cut"] = res.cut.members();
    j["value"] = res.value;
  } else if (a.kind == "internal-expansion") {
    const double v = oracle::min_internal_expansion_exact(p, parse_subset(a.s, n));
    j["value"] = std::isinf(v) ? json(nullptr) : json(v);
  } else if (a.kind == "low-info") {
    const auto T = parse_subset(a.t, n);
    const double v = oracle::min_escape_ratio_exact(p.matrix(), T);
    j["min_escape_ratio"] = std::isinf(v) ? json(nullptr) : json(v);
    j["floor"] = a.floor;
    j["holds"] = oracle::low_info_claim_check(p, T, a.floor);
  } else if (a.kind == "edge-distance") {
    if (a.other.empty()) throw io::ParseError("edge-distance needs --other <matrix>");
    const auto q = load_chain(a.other);
    const auto d = oracle::edge_distribution_distance_exact(p, q, parse_subset(a.r, n));
    j["tv"] = d.tv;
    j["hel_sq"] = d.hel_sq;
  } else {
    throw io::ParseError("unknown oracle '" + a.kind + "'");
  }
  print(j);
  return 0;
}

int cmd_bench(const Globals& g, const std::string& criteria) {
  acceptance::SuiteOptions opts{load_config(g), g.threads};
  std::vector<int> ids;
  if (criteria.empty()) {
    for (int i = 1; i <= acceptance::kCriteria; ++i) ids.push_back(i);
  } else {
    for (State s : parse_subset(criteria, acceptance::kCriteria + 1)) {
      if (s < 1) throw io::ParseError("criteria are numbered from 1");
      ids.push_back(s);
    }
  }
  std::vector<acceptance::CriterionResult> results;
  for (int id : ids) {
    results.push_back(acceptance::run_criterion(id, opts));
    std::cerr << acceptance::summary_line(results.back()) << "\n";
  }
  const json rep = acceptance::report(opts, results);
  print(rep);
  return rep["all_passed"].get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identity testing of symmetric Markov chains from a single trajectory"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::uint64_t seed = 0;
  double eps = 0, beta = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (falls back to MCIDTEST_SEED)");
  auto* eps_opt = app.add_option("--eps", eps, "Distance parameter eps");
  auto* beta_opt = app.add_option("--beta", beta, "Partition tolerance beta");
  app.add_option("--config", g.config_path, "Experiment config (JSON)")->check(CLI::ExistingFile);
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);

  std::string matrix, trajectory, out, criteria;
  std::size_t length = 0;
  int start = 0;
  OracleArgs oa;

  auto* part = app.add_subcommand("partition", "Partition the state space into high/low-information sets");
  part->add_option("matrix", matrix, "Transition matrix file")->required();

  auto* test = app.add_subcommand("test", "Test a trajectory against a reference chain");
  test->add_option("matrix", matrix, "Reference transition matrix file")->required();
  test->add_option("trajectory", trajectory, "Trajectory file")->required();

  auto* sim = app.add_subcommand("simulate", "Simulate a trajectory");
  sim->add_option("matrix", matrix, "Transition matrix file")->required();
  sim->add_option("--length", length, "Number of states")->required();
  sim->add_option("--start", start, "Start state")->required();
  sim->add_option("--out", out, "Output file (default standard output)");

  auto* orc = app.add_subcommand("oracle", "Exact brute-force values on small chains");
  orc->add_option("kind", oa.kind, "sparsest-cut | cheeger | internal-expansion | low-info | edge-distance")
      ->required()
      ->check(CLI::IsMember({"sparsest-cut", "cheeger", "internal-expansion", "low-info", "edge-distance"}));
  orc->add_option("matrix", oa.matrix, "Transition matrix file")->required();
  orc->add_option("--T", oa.t, "Comma-separated states kept off the cut / audited as low-information");
  orc->add_option("--S", oa.s, "Comma-separated states for internal-expansion");
  orc->add_option("--R", oa.r, "Comma-separated states for edge-distance");
  orc->add_option("--floor", oa.floor, "Escape floor for low-info");
  orc->add_option("--other", oa.other, "Second matrix for edge-distance");

  auto* bench = app.add_subcommand("bench", "Run the acceptance suite");
  bench->add_option("--criteria", criteria, "Comma-separated criterion numbers (default all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (*seed_opt) g.seed = seed;
  if (*eps_opt) g.eps = eps;
  if (*beta_opt) g.beta = beta;

  try {
    if (*part) return cmd_partition(g, matrix);
    if (*test) return cmd_test(g, matrix, trajectory);
    if (*sim) return cmd_simulate(g, matrix, length, start, out);
    if (*orc) return cmd_oracle(oa);
    if (*bench) return cmd_bench(g, criteria);
  } catch (const Exit& e) {
    return e.code;
  } catch (const io::ParseError& e) {
    std::cerr << "mcidtest: " << e.what() << "\n";
    return 2;
  } catch (const oracle::BudgetExceeded& e) {
    std::cerr << "mcidtest: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "mcidtest: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "mcidtest: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mcidtest: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
