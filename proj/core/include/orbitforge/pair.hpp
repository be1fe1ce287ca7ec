#pragma once

#include <cstddef>
#include <optional>

#include <orbitforge/nilpotent.hpp>
#include <orbitforge/space.hpp>

namespace orbitforge {

// An operator together with an invariant carrier subspace on which the
// ambient structure restricts nondegenerately.
struct Pair {
  StructuredSpace space;
  Mat<GaussianRational> y;
  Subspace carrier;

  // Carrier-coordinate views, filled by make_pair.
  StructuredSpace on_carrier;
  Mat<GaussianRational> a;
};

// Structure matrices rewritten in the coordinates of w's basis columns.
// NotInvariant if w is not sigma-invariant.
StructuredSpace restrict_space(const StructuredSpace& space, const Subspace& w);

// Validates: carrier y- and sigma-invariant, restricted structure passes
// check_compatibility (nondegenerate form, sigma laws), restricted operator
// passes algebra_membership.
Pair make_pair(StructuredSpace space, Mat<GaussianRational> y, Subspace carrier);
Pair make_full_pair(StructuredSpace space, Mat<GaussianRational> y);

// The quotient W/YW of a uniform nilpotent pair, with the induced anti-linear
// map and the form tau_bar(u+YW, v+YW) = tau(u, Y^h v).  For the hermitian
// family the stored Gram is hermitian when h is even and anti-hermitian when
// h is odd; the Form kind stays Hermitian (evaluation convention only).
struct ReducedPair {
  std::size_t dim = 0;
  std::optional<AntiLinearMap> sigma_bar;
  std::optional<Form> tau_bar;
  Mat<GaussianRational> lift;  // ambient representatives, one column per class
  std::size_t h = 0;
};

// Errors: NotNilpotent, NotUniform (carrier dim must be (h+1) * dim ker Y).
ReducedPair reduced_pair(const Pair& p);

}  // namespace orbitforge
