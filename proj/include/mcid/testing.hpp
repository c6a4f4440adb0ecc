#pragma once

#include "mcid/chain.hpp"
#include "mcid/constants.hpp"
#include "mcid/linalg.hpp"
#include "mcid/partition.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcid {

/// Distribution over {(i, j) : i, j in R} plus the exit outcome eta.
/// Outcome (R[a], R[b]) has index a * |R| + b; eta has index |R|^2.
class EdgeDistribution {
 public:
  EdgeDistribution(StateSubset r, Eigen::VectorXd probs);

  const StateSubset& subset() const { return r_; }
  const Eigen::VectorXd& probs() const { return probs_; }
  int support_size() const { return static_cast<int>(probs_.size()); }
  int eta_index() const { return r_.size() * r_.size(); }
  /// Outcome index of the transition from state i to state j, both in R.
  int index(State i, State j) const;
  double mass(State i, State j) const { return probs_(index(i, j)); }
  double eta_mass() const { return probs_(eta_index()); }
  Distribution distribution() const { return Distribution(probs_); }

 private:
  StateSubset r_;
  Eigen::VectorXd probs_;
  std::vector<int> local_;  // state -> position in R, or -1
};

EdgeDistribution edge_distribution(const StochasticMatrix& p, const StateSubset& r);

/// Outcomes as EdgeDistribution indices over a declared support.
struct SampleSet {
  std::vector<int> outcomes;
  int support_size = 0;

  std::size_t size() const { return outcomes.size(); }
  Eigen::VectorXd histogram() const;
};

struct GenerationResult {
  /// Empty when some requested state was not visited often enough.
  std::optional<SampleSet> samples;
  /// Visits to T consumed before every request was met (or all visits, on failure).
  std::size_t positions_used = 0;
  /// Per-state request counts drawn from Uniform(T), indexed by position in T.
  std::vector<long> requests;
};

/// Turns a single trajectory into l independent draws from edge_distribution(P, T).
GenerationResult generate_iid_samples(const Trajectory& w, const StateSubset& T, std::size_t l, std::uint64_t seed);
/// Same procedure on an on-demand trajectory; scans until every request is met.
GenerationResult generate_iid_samples(LazyTrajectory& w, const StateSubset& T, std::size_t l, std::uint64_t seed);
/// The scan alone, with per-state request counts given (indexed by position in T).
GenerationResult generate_with_requests(const Trajectory& w, const StateSubset& T, std::vector<long> requests);

class InsufficientSamples : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Decision { Same, Different };

struct Verdict {
  Decision value = Decision::Same;
  /// Component whose samples decided, if any.
  std::optional<StateSubset> component;
  std::string reason;
};

struct TesterOptions {
  double c_test = Constants{}.c_test;
  bool enforce_sample_requirement = true;
  int calibration_trials = 2000;
  std::uint64_t calibration_seed = 0x5eed;
};

/// c_test sqrt(k) / eps_sq * ln(1/delta), rounded up.
std::size_t required_iid_samples(int support_size, double eps_sq, double delta, double c_test);

/// Collision-corrected chi-square statistic sum ((X - m p)^2 - X) / (X + m p) over outcomes.
double chi_square_statistic(const Eigen::VectorXd& counts, const Eigen::VectorXd& p);

/// Tests samples ~ p against d_Hel^2(p, q) >= eps_sq by majority vote over
/// ceil(9 ln(1/delta)) batches, each thresholded at its Monte-Carlo null 3/4 quantile.
Verdict identity_test_iid(const EdgeDistribution& p, const SampleSet& samples, double eps_sq, double delta,
                          const TesterOptions& options = {});

std::size_t samples_per_component(int component_size, int n, double eps, const Constants& constants);
std::size_t trajectory_length(int n, double eps, const Constants& constants);

/// Full pipeline: partition P at eps/16, then test the first component that yields samples.
Verdict identity_test_chain(const Trajectory& w, const StochasticMatrix& p, double eps, std::uint64_t seed,
                            const Constants& constants = {});
/// Pipeline on a partition already computed as partition_graph(p, eps / 16, ...).
Verdict identity_test_chain(const Trajectory& w, const StochasticMatrix& p, const Partition& partition, double eps,
                            std::uint64_t seed, const Constants& constants = {});

}  // namespace mcid
