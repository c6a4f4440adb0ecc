#include "mcid/testing.hpp"

#include "mcid/rng.hpp"

#include <algorithm>
#include <cmath>

namespace mcid {

EdgeDistribution::EdgeDistribution(StateSubset r, Eigen::VectorXd probs) : r_(std::move(r)), probs_(std::move(probs)) {
  if (r_.empty()) throw std::invalid_argument("edge distribution over an empty subset");
  if (probs_.size() != eta_index() + 1) throw DimensionError("edge distribution support must be |R|^2 + 1");
  local_.assign(static_cast<std::size_t>(r_.universe_size()), -1);
  for (int a = 0; a < r_.size(); ++a) local_[r_[a]] = a;
}

int EdgeDistribution::index(State i, State j) const {
  const int a = local_.at(i), b = local_.at(j);
  if (a < 0 || b < 0) throw std::out_of_range("transition endpoint outside R");
  return a * r_.size() + b;
}

EdgeDistribution edge_distribution(const StochasticMatrix& p, const StateSubset& r) {
  if (r.empty()) throw std::invalid_argument("edge_distribution: R must be nonempty");
  if (r.universe_size() != p.size()) throw DimensionError("edge_distribution: R universe mismatch");
  const int k = r.size();
  Eigen::VectorXd probs(k * k + 1);
  double inside = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      const double v = p(r[a], r[b]) / k;
      probs(a * k + b) = v;
      inside += v;
    }
  double eta = 1.0 - inside;
  if (eta < -1e-12) throw InvariantError("edge_distribution: internal mass exceeds 1");
  probs(k * k) = std::max(0.0, eta);
  return EdgeDistribution(r, std::move(probs));
}

Eigen::VectorXd SampleSet::histogram() const {
  Eigen::VectorXd h = Eigen::VectorXd::Zero(support_size);
  for (int o : outcomes) h(o) += 1.0;
  return h;
}

namespace {

// The l draws from Uniform(T), as positions in T.
std::vector<int> draw_states(const StateSubset& T, std::size_t l, std::uint64_t seed) {
  if (l < 1) throw std::invalid_argument("generate_iid_samples: l must be at least 1");
  if (T.empty()) throw std::invalid_argument("generate_iid_samples: T must be nonempty");
  std::vector<int> draws(l);
  Rng rng(seed);
  for (auto& d : draws) d = static_cast<int>(rng.below(static_cast<std::uint64_t>(T.size())));
  return draws;
}

std::vector<long> histogram(const std::vector<int>& draws, int k) {
  std::vector<long> r(static_cast<std::size_t>(k), 0);
  for (int d : draws) ++r[d];
  return r;
}

// Scans a word position by position; `at(i)` returns the state or -1 past the end.
// Sample s is the transition out of the next unused visit to draws[s], so the output
// follows draw order. Without draws the outcomes are grouped by state.
template <typename At>
GenerationResult generate_impl(At&& at, const StateSubset& T, std::vector<long> requests,
                               const std::vector<int>* draws = nullptr) {
  if (T.empty()) throw std::invalid_argument("generate_iid_samples: T must be nonempty");
  if (requests.size() != static_cast<std::size_t>(T.size()))
    throw DimensionError("generate_iid_samples: one request count per state of T");
  const int k = T.size();
  std::vector<int> local(static_cast<std::size_t>(T.universe_size()), -1);
  for (int a = 0; a < k; ++a) local[T[a]] = a;

  GenerationResult out;
  out.requests = std::move(requests);
  std::size_t l = 0;
  for (long v : out.requests) {
    if (v < 0) throw std::invalid_argument("generate_iid_samples: negative request");
    l += static_cast<std::size_t>(v);
  }

  std::vector<long> r = out.requests;
  long outstanding = static_cast<long>(std::count_if(r.begin(), r.end(), [](long v) { return v > 0; }));
  std::vector<std::vector<int>> per_state(static_cast<std::size_t>(k));
  std::size_t visits = 0;

  State cur = at(0);
  for (std::size_t i = 0; cur >= 0; ++i) {
    const State next = at(i + 1);
    if (next < 0) break;  // the last position has no successor
    const int a = cur < static_cast<State>(local.size()) ? local[cur] : -1;
    if (a >= 0) {
      if (outstanding > 0) ++visits;
      if (r[a] > 0) {
        const int b = local[next];
        per_state[a].push_back(b >= 0 ? a * k + b : k * k);
        if (r[a] == 1) --outstanding;
      }
      // Decrement on every visit, including when r is already exhausted.
      --r[a];
    }
    cur = next;
    if (at.stop_when_done() && outstanding == 0) break;
  }
  out.positions_used = visits;
  if (outstanding > 0) return out;
  SampleSet samples{{}, k * k + 1};
  samples.outcomes.reserve(l);
  if (draws) {
    std::vector<std::size_t> used(static_cast<std::size_t>(k), 0);
    for (int d : *draws) samples.outcomes.push_back(per_state[d][used[d]++]);
  } else {
    for (const auto& v : per_state) samples.outcomes.insert(samples.outcomes.end(), v.begin(), v.end());
  }
  out.samples = std::move(samples);
  return out;
}

struct FiniteWord {
  const Trajectory& w;
  State operator()(std::size_t i) const { return i < w.states.size() ? w.states[i] : -1; }
  bool stop_when_done() const { return false; }
};

struct StreamWord {
  LazyTrajectory& w;
  State operator()(std::size_t i) const { return w.at(i); }
  bool stop_when_done() const { return true; }
};

}  // namespace

GenerationResult generate_iid_samples(const Trajectory& w, const StateSubset& T, std::size_t l, std::uint64_t seed) {
  if (T.universe_size() != w.n) throw DimensionError("generate_iid_samples: T universe mismatch");
  const auto draws = draw_states(T, l, seed);
  return generate_impl(FiniteWord{w}, T, histogram(draws, T.size()), &draws);
}

GenerationResult generate_iid_samples(LazyTrajectory& w, const StateSubset& T, std::size_t l, std::uint64_t seed) {
  const auto draws = draw_states(T, l, seed);
  return generate_impl(StreamWord{w}, T, histogram(draws, T.size()), &draws);
}

GenerationResult generate_with_requests(const Trajectory& w, const StateSubset& T, std::vector<long> requests) {
  if (T.universe_size() != w.n) throw DimensionError("generate_iid_samples: T universe mismatch");
  return generate_impl(FiniteWord{w}, T, std::move(requests));
}

std::size_t required_iid_samples(int support_size, double eps_sq, double delta, double c_test) {
  return static_cast<std::size_t>(std::ceil(c_test * std::sqrt(static_cast<double>(support_size)) / eps_sq *
                                            std::log(1.0 / delta)));
}

double chi_square_statistic(const Eigen::VectorXd& counts, const Eigen::VectorXd& p) {
  const double m = counts.sum();
  double z = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double x = counts(i), e = m * p(i);
    if (x + e <= 0.0) continue;
    z += ((x - e) * (x - e) - x) / (x + e);
  }
  return z;
}

namespace {

double null_quantile(const Eigen::VectorXd& p, std::size_t batch, const TesterOptions& options) {
  Eigen::VectorXd cdf(p.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) cdf(i) = acc += p(i);
  Rng rng(derive_seed(options.calibration_seed, batch));
  std::vector<double> stats(static_cast<std::size_t>(options.calibration_trials));
  Eigen::VectorXd counts(p.size());
  for (auto& s : stats) {
    counts.setZero();
    for (std::size_t t = 0; t < batch; ++t) {
      const double u = rng.uniform() * acc;
      const auto* it = std::upper_bound(cdf.data(), cdf.data() + cdf.size(), u);
      const Eigen::Index idx = std::min<Eigen::Index>(it - cdf.data(), p.size() - 1);
      counts(idx) += 1.0;
    }
    s = chi_square_statistic(counts, p);
  }
  const std::size_t q = static_cast<std::size_t>(std::ceil(0.75 * static_cast<double>(stats.size()))) - 1;
  std::nth_element(stats.begin(), stats.begin() + static_cast<std::ptrdiff_t>(q), stats.end());
  return stats[q];
}

}  // namespace

Verdict identity_test_iid(const EdgeDistribution& p, const SampleSet& samples, double eps_sq, double delta,
                          const TesterOptions& options) {
  if (!(eps_sq > 0.0 && eps_sq < 1.0)) throw std::invalid_argument("eps_sq must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (samples.support_size != p.support_size()) throw DimensionError("samples drawn over a different support");
  if (samples.size() == 0) throw InsufficientSamples("identity_test_iid: no samples");
  if (options.enforce_sample_requirement) {
    const std::size_t need = required_iid_samples(p.support_size(), eps_sq, delta, options.c_test);
    if (samples.size() < need)
      throw InsufficientSamples("identity_test_iid: " + std::to_string(samples.size()) + " samples, need " +
                                std::to_string(need));
  }

  Verdict v;
  v.component = p.subset();
  for (int o : samples.outcomes) {
    if (o < 0 || o >= p.support_size()) throw std::out_of_range("sample outcome outside the declared support");
    if (p.probs()(o) <= 0.0) {
      v.value = Decision::Different;
      v.reason = "sample outcome has zero probability under the reference chain";
      return v;
    }
  }

  const std::size_t m = samples.size();
  const std::size_t batches =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(9.0 * std::log(1.0 / delta))), 1, m);
  const std::size_t small = m / batches, extra = m % batches;
  double thr_small = 0.0, thr_large = 0.0;
  if (small > 0) thr_small = null_quantile(p.probs(), small, options);
  if (extra > 0) thr_large = null_quantile(p.probs(), small + 1, options);

  std::size_t rejections = 0, pos = 0;
  Eigen::VectorXd counts(p.support_size());
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t size = small + (b < extra ? 1 : 0);
    counts.setZero();
    for (std::size_t t = 0; t < size; ++t) counts(samples.outcomes[pos++]) += 1.0;
    if (chi_square_statistic(counts, p.probs()) > (b < extra ? thr_large : thr_small)) ++rejections;
  }
  if (2 * rejections > batches) {
    v.value = Decision::Different;
    v.reason = std::to_string(rejections) + " of " + std::to_string(batches) + " batches rejected the reference";
  } else {
    v.value = Decision::Same;
    v.reason = std::to_string(rejections) + " of " + std::to_string(batches) + " batches rejected the reference";
  }
  return v;
}

std::size_t samples_per_component(int component_size, int n, double eps, const Constants& constants) {
  return static_cast<std::size_t>(std::ceil(constants.c_samp * component_size * log_floor1(n) / (eps * eps)));
}

std::size_t trajectory_length(int n, double eps, const Constants& constants) {
  const double ln = log_floor1(n);
  return static_cast<std::size_t>(std::ceil(constants.c_len * n * ln * ln / std::pow(eps, 4)));
}

Verdict identity_test_chain(const Trajectory& w, const StochasticMatrix& p, double eps, std::uint64_t seed,
                            const Constants& constants) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  const Partition part = partition_graph(p, eps / 16.0, derive_seed(seed, 0), constants);
  return identity_test_chain(w, p, part, eps, seed, constants);
}

Verdict identity_test_chain(const Trajectory& w, const StochasticMatrix& p, const Partition& partition, double eps,
                            std::uint64_t seed, const Constants& constants) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  const int n = p.size();
  if (w.n != n) throw DimensionError("trajectory universe differs from the reference chain");
  for (std::size_t idx = 0; idx < partition.high_info.size(); ++idx) {
    const StateSubset& s = partition.high_info[idx];
    const std::size_t l = samples_per_component(s.size(), n, eps, constants);
    GenerationResult gen = generate_iid_samples(w, s, l, derive_seed(seed, {1, idx}));
    if (!gen.samples) continue;
    TesterOptions opts;
    opts.c_test = constants.c_test;
    opts.enforce_sample_requirement = false;
    opts.calibration_seed = derive_seed(seed, {2, idx});
    return identity_test_iid(edge_distribution(p, s), *gen.samples, eps * eps / 32.0, 1.0 / (10.0 * n), opts);
  }
  return Verdict{Decision::Different, std::nullopt, "AllGenerationFailed"};
}

}  // namespace mcid
