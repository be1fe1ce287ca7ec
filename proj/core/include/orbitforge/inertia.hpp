#pragma once

#include <cstddef>

#include "orbitforge/matrix.hpp"

namespace orbitforge {

struct Inertia {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;

  std::size_t dimension() const { return positive + negative + zero; }
  bool operator==(const Inertia&) const = default;
};

// Inertia of a symmetric rational matrix by exact congruence diagonalization.
Inertia symmetric_inertia(const Mat<Rational>& a);

// Inertia of a hermitian matrix over Q(i).
Inertia hermitian_inertia(const Mat<GaussianRational>& a);

}  // namespace orbitforge
