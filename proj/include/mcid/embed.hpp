#pragma once

#include "mcid/constants.hpp"
#include "mcid/linalg.hpp"
#include "mcid/lp.hpp"

#include <cstdint>
#include <vector>

namespace mcid {

/// Points of a metric mapped into L1; row i is f(i).
struct Embedding {
  Eigen::MatrixXd coords;
  /// max over pairs with d > 0 of |f(i) - f(j)|_1 / d(i,j), after rescaling.
  double distortion = 1.0;
  /// Global factor applied so that d <= |f(i) - f(j)|_1 holds for every pair.
  double rescale = 1.0;
  int draws = 1;

  int size() const { return static_cast<int>(coords.rows()); }
  int dimension() const { return static_cast<int>(coords.cols()); }
  double l1(int i, int j) const { return (coords.row(i) - coords.row(j)).cwiseAbs().sum(); }
};

/// ceil(log2 n) scales times ceil(c_emb ln n) repetitions.
int bourgain_dimension(int n, double c_emb);

/// Randomized Bourgain embedding with a measured rescale enforcing the L1 lower bound.
Embedding bourgain_embed(const Metric& d, std::uint64_t seed, double c_emb = Constants{}.c_emb);

struct WeightedCut {
  StateSubset side;
  double weight;
};

struct CutDecomposition {
  std::vector<WeightedCut> cuts;

  /// sum over cuts of weight * [i, j separated].
  double distance(int i, int j) const;
};

/// Threshold cuts per coordinate: for sorted distinct values v_0 < ... < v_k the cut
/// {i : x_i <= v_q} carries weight v_{q+1} - v_q.
CutDecomposition l1_to_cuts(const Embedding& e);

struct FindCompResult {
  StateSubset cut;
  double cut_value = 0.0;  // g measured on the restriction to the universe
  double lp_value = 0.0;
  double distortion = 1.0;
  int candidates = 0;
};

/// Approximate sparsest cut of P restricted to `universe`, with all of T kept on the far side.
/// `p` is the full matrix; `universe` and `T` index into it.
FindCompResult find_comp(const Eigen::MatrixXd& p, const StateSubset& universe, const StateSubset& T,
                         std::uint64_t seed, const Constants& constants = {});
inline FindCompResult find_comp(const StochasticMatrix& p, const StateSubset& universe, const StateSubset& T,
                                std::uint64_t seed, const Constants& constants = {}) {
  return find_comp(p.matrix(), universe, T, seed, constants);
}

}  // namespace mcid
