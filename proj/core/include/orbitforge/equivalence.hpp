#pragma once

#include <cstdint>
#include <optional>

#include <orbitforge/classify.hpp>

namespace orbitforge {

struct EquivalenceResult {
  bool equivalent = false;
  std::optional<Mat<GaussianRational>> witness;  // carrier coordinates
  std::string detail;                            // why not, when inequivalent
};

// Decides by classification agreement and composes the two classification
// witnesses into an explicit conjugation, verified exactly before return.
// Requires the same ambient family and dimension.
EquivalenceResult triples_equivalent(const Triple& a, const Triple& b);

// Transport of the triple along an ambient isotropy-group element
// (invertible, sigma-commuting, tau-preserving, fixes v0; all checked,
// NotInIsotropyGroup names the first failure).  The carrier moves to P W.
Triple conjugate_triple(const Triple& t, const Mat<GaussianRational>& p);

// Seeded product of verified elementary moves fixing v0: chain rescalings,
// isotropic shears, sigma-equivariant rotations.
Mat<GaussianRational> random_isotropy_element(const StructuredSpace& space,
                                              const Vec<GaussianRational>& v0,
                                              std::uint64_t seed);

}  // namespace orbitforge
