#pragma once

#include <cstddef>
#include <optional>

#include <orbitforge/pair.hpp>

namespace orbitforge {

// A pair with a marked special vector annihilated by the operator.
struct Triple {
  Pair pair;
  Vec<GaussianRational> v0;
  // sigma-eigenvalue of v0: +-1 for sigma_+ families, +-i for sigma_-,
  // absent when the family has no sigma.
  std::optional<GaussianRational> condition_eigenvalue;
};

// Validates: v0 nonzero, inside the carrier, special, and Y v0 = 0.
Triple make_triple(Pair pair, Vec<GaussianRational> v0);

// A successful height search: a special vector w with Y^h w = v0 exactly
// (form-involved families) or lambda Y^h w = v0 normalised to lambda = 1
// (the form-free gl families).
struct HeightSearch {
  std::size_t h = 0;
  Vec<GaussianRational> witness;  // ambient coordinates
  GaussianRational mu0;           // tau(w, v0); 1 for the form-free families
  std::optional<GaussianRational> sector;  // sigma-eigenvalue of the witness
};

// Largest h admitting a special solution, sectors searched in their fixed
// order; NoDistinguishedHeight when no height works.
HeightSearch distinguished_height_search(const Triple& t);
std::size_t distinguished_height(const Triple& t);

enum class ParameterClosure { Singleton, RealScaleClass };

struct ParameterSet {
  GaussianRational representative;
  ParameterClosure closure = ParameterClosure::Singleton;
  Vec<GaussianRational> witness;  // special vector realizing the representative
};

// Parameter set at height h; EmptyParameterSet unless h is the
// distinguished height of the triple.
ParameterSet parameter_set(const Triple& t, std::size_t h);

// Isotropy repair used by the height search and the classification: shifts
// w inside w + span(candidates) (rational multiples when real_scalars) to an
// isotropic vector, exactly; nullopt when the bounded search finds none.
std::optional<Vec<GaussianRational>> repair_isotropy(
    const StructuredSpace& space, const Vec<GaussianRational>& w,
    const std::vector<Vec<GaussianRational>>& candidates, bool real_scalars);

}  // namespace orbitforge
