#pragma once

#include <optional>
#include <vector>

#include <orbitforge/matrix.hpp>

namespace orbitforge {

struct EigenvalueData {
  GaussianRational value;
  std::size_t multiplicity = 0;
};

// Eigenvalues with algebraic multiplicities when the characteristic
// polynomial splits over Q(i); nullopt otherwise.  Sorted by value.
std::optional<std::vector<EigenvalueData>> rational_spectrum(
    const Mat<GaussianRational>& y);

struct SpectralBlock {
  GaussianRational eigenvalue;
  std::vector<std::size_t> block_sizes;  // weakly decreasing
};

// Full Jordan block structure over Q(i); nullopt if the spectrum is not
// rational.
std::optional<std::vector<SpectralBlock>> jordan_structure(
    const Mat<GaussianRational>& y);

struct JordanDecomposition {
  Mat<GaussianRational> semisimple;
  Mat<GaussianRational> nilpotent;
};

// Y = S + N with SN = NS, N nilpotent, S diagonalizable over Q(i).
// IrrationalSpectrum when the characteristic polynomial does not split.
JordanDecomposition jordan_decomposition(const Mat<GaussianRational>& y);

}  // namespace orbitforge
