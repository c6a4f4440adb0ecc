#pragma once

#include "mcid/chain.hpp"
#include "mcid/linalg.hpp"
#include "mcid/partition.hpp"
#include "mcid/testing.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace mcid::io {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raw matrix text: first line `n`, then n rows of n decimals; `#` starts a comment.
/// Returns the entries unvalidated.
Eigen::MatrixXd parse_matrix(std::istream& in);
Eigen::MatrixXd read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const Eigen::MatrixXd& m);

/// Header `#n=<universe>` followed by one 0-based state per line.
Trajectory parse_trajectory(std::istream& in);
Trajectory read_trajectory_file(const std::string& path);
void write_trajectory(std::ostream& out, const Trajectory& w);

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// Settings for a bench run. Every random stream in the run derives from master_seed.
struct ExperimentConfig {
  std::uint64_t master_seed = kDefaultSeed;
  bool master_seed_given = false;  // set when the source named a seed explicitly
  double eps = 0.3;
  std::optional<double> beta_override;
  int trials = 100;
  Constants constants;
  std::size_t trajectory_cap = LazyTrajectory::kDefaultCap;

  /// Throws std::invalid_argument unless trials >= 1, eps in (0, 1) and every constant is positive.
  void validate() const;
  double beta() const { return beta_override.value_or(eps / 16.0); }
};

/// Unknown keys are rejected. Missing keys keep their defaults.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig read_config_file(const std::string& path);

nlohmann::ordered_json to_json(const ExperimentConfig& c);
nlohmann::ordered_json to_json(const StateSubset& s);
nlohmann::ordered_json to_json(const Partition& p);
nlohmann::ordered_json to_json(const Verdict& v);

}  // namespace mcid::io
