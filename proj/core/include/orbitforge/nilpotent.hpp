#pragma once

#include <cstddef>
#include <vector>

#include <orbitforge/matrix.hpp>

namespace orbitforge {

struct Subspace {
  std::size_t ambient_dim = 0;
  Mat<GaussianRational> basis;  // independent columns

  std::size_t dim() const { return basis.cols(); }
};

// Verifies independence (rank = column count).
Subspace make_subspace(Mat<GaussianRational> basis);
Subspace full_subspace(std::size_t n);

Subspace kernel_basis(const Mat<GaussianRational>& m);

// Standard basis vectors extending the span of the given columns to the
// full space of the stated dimension.
Mat<GaussianRational> standard_complement(const Mat<GaussianRational>& span,
                                          std::size_t dim);

// h with N^h != 0 and N^{h+1} = 0; 0 for the zero map.
std::size_t nilpotency_height(const Mat<GaussianRational>& n);

// ker Y^dim, the largest subspace on which Y is nilpotent.
Subspace generalized_zero_eigenspace(const Mat<GaussianRational>& y);

// One Jordan chain: vectors[0] = w, vectors[t] = N^t w.
struct Chain {
  std::vector<Vec<GaussianRational>> vectors;

  std::size_t length() const { return vectors.size(); }
  const Vec<GaussianRational>& top() const { return vectors.front(); }
  const Vec<GaussianRational>& bottom() const { return vectors.back(); }
};

// Jordan chains of N restricted to W, lengths weakly decreasing, chain
// vectors jointly a basis of W.  Tops are chosen deterministically by
// greedy scan of the canonical kernel bases, deepest filtration layer
// first.
std::vector<Chain> uniform_chain_basis(const Mat<GaussianRational>& n,
                                       const Subspace& w);

// Coordinates of N restricted to W in W's basis; NotInvariant if NW is
// not contained in W.
Mat<GaussianRational> restrict_to(const Mat<GaussianRational>& n,
                                  const Subspace& w);

}  // namespace orbitforge
