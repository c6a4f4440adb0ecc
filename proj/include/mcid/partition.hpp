#pragma once

#include "mcid/constants.hpp"
#include "mcid/linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mcid {

/// One run of the component extraction, with the floors it certifies.
struct ExtractResult {
  /// Empty when no component could be extracted from the complement of T.
  std::optional<StateSubset> component;
  /// Inner-loop break threshold beta / (8 ln n).
  double inner_threshold = 0.0;
  /// Lower bound asserted for every internal sub-cut expansion of the component.
  double claim2_floor = 0.0;
  /// On failure: lower bound asserted for h_P(S) of every S outside T.
  double claim3_floor = 0.0;
  int inner_iterations = 0;
  bool used_fallback = false;
};

/// Extracts one well-connected, weakly-leaking component disjoint from T.
/// Returns no component immediately when T is the whole space.
ExtractResult extract_component(const StochasticMatrix& p, const StateSubset& T, double beta, std::uint64_t seed,
                                const Constants& constants = {});

/// Same procedure, but the inner loop measures sub-cut expansion against the full P rather
/// than the submatrix P_{S_t}. Exposed only to pin down the difference in tests.
ExtractResult extract_component_full_measure(const StochasticMatrix& p, const StateSubset& T, double beta,
                                             std::uint64_t seed, const Constants& constants = {});

/// Disjoint high-information components plus the low-information remainder.
struct Partition {
  std::vector<StateSubset> high_info;
  StateSubset low_info;
  double beta = 0.0;
  /// Sub-cut expansion floor recorded for each high_info entry.
  std::vector<double> claim2_floors;
  /// Lower bound on sum_{i in R, j not in R} P_ij / |R| for every nonempty R inside low_info.
  double claim3_floor = 0.0;

  /// Throws InvariantError unless the parts are disjoint, nonempty and cover [n].
  void validate(int n) const;
};

Partition partition_graph(const StochasticMatrix& p, double beta, std::uint64_t seed,
                          const Constants& constants = {});

/// beta / (8 C_fc ln n ln |S|), logs floored at 1.
double claim2_floor(double beta, int n, int component_size, const Constants& constants);
/// beta / (8 C_fc ln n): floor on h_P(S) for S outside T when extraction fails.
double claim3_expansion_floor(double beta, int n, const Constants& constants);

}  // namespace mcid
