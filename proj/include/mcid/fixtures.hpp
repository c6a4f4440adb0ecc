#pragma once

#include "mcid/linalg.hpp"

#include <cstdint>
#include <vector>

// Instance generators shared by the tests, the acceptance suite and the CLI.
namespace mcid::fixtures {

/// Random symmetric stochastic matrix. Off-diagonal weights are uniform on [0, 1) and kept
/// with probability `density`; the leftover row mass sits on the diagonal.
StochasticMatrix random_chain(int n, std::uint64_t seed, double density = 1.0);

/// Random chain with every off-diagonal entry positive, hence irreducible.
StochasticMatrix random_connected_chain(int n, std::uint64_t seed);

/// Blocks of the given sizes with random dense interiors. Each state leaks at most
/// `leak` in total to the other blocks.
StochasticMatrix planted_blocks(const std::vector<int>& sizes, double leak, std::uint64_t seed);

/// Two uniform blocks of n/2 states; each state sends `leak` spread evenly over the other block.
StochasticMatrix two_block_chain(int n, double leak);

/// Like two_block_chain, but inside each block a state moves only to the states at
/// the given cyclic offsets (weight (1 - leak) / |offsets| each).
StochasticMatrix circulant_two_block_chain(int n, double leak, const std::vector<int>& offsets);

/// Two uniform blocks joined by a single edge (a, b) of probability `bridge`, where a is the
/// last state of the first block and b the first of the second.
StochasticMatrix bridge_chain(int n, double bridge);

/// Circulant counterpart of bridge_chain with the same bridge edge.
StochasticMatrix circulant_bridge_chain(int n, double bridge, const std::vector<int>& offsets);

/// Two dense blocks of `block` states plus a leaky region of `region` states placed last.
/// Block states leak `leak` each into the region.
StochasticMatrix three_region_chain(int block, int region, double leak);

/// Permutation chain of a random involution: states are paired up and swap deterministically.
/// With n odd one state is left fixed.
StochasticMatrix random_matching_chain(int n, std::uint64_t seed);

/// Uniform chain, every entry 1/n.
StochasticMatrix uniform_chain(int n);

/// Random probability vector with `k` entries.
Distribution random_distribution(int k, std::uint64_t seed);

/// Random subset of [0, n) of exactly `size` states.
StateSubset random_subset(int n, int size, std::uint64_t seed);

}  // namespace mcid::fixtures
