#pragma once

#include <vector>

#include <orbitforge/pair.hpp>
#include <orbitforge/typelabel.hpp>

namespace orbitforge {

// One indecomposable summand: chains in ambient coordinates,
// chains[c].vectors[t] = Y^t top_c.
struct TypeBlock {
  TypeLabel label;  // multiplicity 1
  std::vector<Chain> chains;
};

struct Decomposition {
  std::vector<TypeLabel> labels;  // aggregated, canonical order
  std::vector<TypeBlock> blocks;  // extraction order, heights descending
};

// Splits the carrier of a nilpotent pair into pairwise orthogonal, sigma- and
// Y-invariant indecomposable blocks and reads off their type labels.
Decomposition decompose_nilpotent_pair(const Pair& p);

// Canonical standalone model whose decomposition is exactly the given label
// (multiplicities expand to repeated blocks).  Per-chain Grams are
// anti-diagonal with entries (-1)^i times the top moment.
Pair synthesize_type(const TypeLabel& label);

// Block direct sum of canonical models, one standalone pair.
Pair synthesize_types(Family family, const std::vector<TypeLabel>& labels);

}  // namespace orbitforge
