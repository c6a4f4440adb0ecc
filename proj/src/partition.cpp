#include "mcid/partition.hpp"

#include "mcid/embed.hpp"
#include "mcid/rng.hpp"

#include <stdexcept>

namespace mcid {

double claim2_floor(double beta, int n, int component_size, const Constants& constants) {
  return beta / (8.0 * constants.C_fc * log_floor1(n) * log_floor1(component_size));
}

double claim3_expansion_floor(double beta, int n, const Constants& constants) {
  return beta / (8.0 * constants.C_fc * log_floor1(n));
}

namespace {

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
}

ExtractResult extract_impl(const StochasticMatrix& p, const StateSubset& T, double beta, std::uint64_t seed,
                           const Constants& constants, bool measure_in_submatrix) {
  check_beta(beta);
  const int n = p.size();
  if (T.universe_size() != n) throw DimensionError("extract_component: T universe mismatch");
  const Eigen::MatrixXd& m = p.matrix();

  ExtractResult out;
  out.inner_threshold = beta / (8.0 * log_floor1(n));
  out.claim3_floor = claim3_expansion_floor(beta, n, constants);
  if (T.is_full()) return out;

  const StateSubset all = StateSubset::full(n);
  const StateSubset rest = T.complement();

  StateSubset current;
  bool fallback = n < 2;
  if (!fallback) {
    current = find_comp(m, all, T, derive_seed(seed, 0), constants).cut;
    fallback = expansion(m, current) >= beta / 8.0;
  }
  if (fallback) {
    out.used_fallback = true;
    current = rest;
    if (internal_mass_ratio(m, current) <= 1.0 - beta / 8.0) return out;
  }

  std::uint64_t step = 1;
  while (current.size() > 1) {
    const StateSubset piece = find_comp(m, current, StateSubset::empty(n), derive_seed(seed, step++), constants).cut;
    const StateSubset other = current.minus(piece);
    double v;
    if (measure_in_submatrix) {
      // h_{P_current}(piece): only mass that stays inside `current` counts.
      v = 0.0;
      for (State i : piece)
        for (State j : other) v += m(i, j);
      v /= std::min(piece.size(), other.size());
    } else {
      v = expansion(m, piece);
    }
    if (v >= out.inner_threshold) break;

    // Keep the side with the larger internal mass ratio; ties keep the returned cut.
    const double u_piece = internal_mass_ratio(m, piece);
    const double u_other = internal_mass_ratio(m, other);
    current = u_piece >= u_other ? piece : other;
    ++out.inner_iterations;
  }
  out.claim2_floor = claim2_floor(beta, n, current.size(), constants);
  out.component = std::move(current);
  return out;
}

}  // namespace

ExtractResult extract_component(const StochasticMatrix& p, const StateSubset& T, double beta, std::uint64_t seed,
                                const Constants& constants) {
  return extract_impl(p, T, beta, seed, constants, true);
}

ExtractResult extract_component_full_measure(const StochasticMatrix& p, const StateSubset& T, double beta,
                                             std::uint64_t seed, const Constants& constants) {
  return extract_impl(p, T, beta, seed, constants, false);
}

void Partition::validate(int n) const {
  std::vector<int> owner(static_cast<std::size_t>(n), 0);
  auto mark = [&](const StateSubset& s) {
    if (s.universe_size() != n) throw InvariantError("partition part has the wrong universe");
    for (State x : s)
      if (owner[x]++ != 0) throw InvariantError("partition parts overlap at state " + std::to_string(x));
  };
  for (const auto& s : high_info) {
    if (s.empty()) throw InvariantError("empty high-information set");
    mark(s);
  }
  mark(low_info);
  for (int i = 0; i < n; ++i)
    if (owner[i] != 1) throw InvariantError("state " + std::to_string(i) + " is not covered by the partition");
  if (claim2_floors.size() != high_info.size()) throw InvariantError("missing sub-cut expansion floors");
}

Partition partition_graph(const StochasticMatrix& p, double beta, std::uint64_t seed, const Constants& constants) {
  check_beta(beta);
  const int n = p.size();
  Partition out;
  out.beta = beta;
  StateSubset taken = StateSubset::empty(n);
  for (std::uint64_t round = 0;; ++round) {
    if (round > static_cast<std::uint64_t>(n)) throw std::logic_error("partition_graph did not terminate");
    ExtractResult r = extract_component(p, taken, beta, derive_seed(seed, round), constants);
    if (!r.component) {
      // Converting h to the escape form with an |R| denominator loses at most a factor 9.
      out.claim3_floor = r.claim3_floor / 9.0;
      break;
    }
    out.high_info.push_back(*r.component);
    out.claim2_floors.push_back(r.claim2_floor);
    taken = taken.unite(*r.component);
  }
  out.low_info = taken.complement();
  out.validate(n);
  return out;
}

}  // namespace mcid
