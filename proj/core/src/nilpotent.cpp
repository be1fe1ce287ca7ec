#include <orbitforge/nilpotent.hpp>

#include <orbitforge/errors.hpp>

namespace orbitforge {

Subspace make_subspace(Mat<GaussianRational> basis) {
  if (rank(basis) != basis.cols()) {
    fail(ErrorName::ConditionViolated, "subspace basis is dependent");
  }
  Subspace out;
  out.ambient_dim = basis.rows();
  out.basis = std::move(basis);
  return out;
}

Subspace full_subspace(std::size_t n) {
  return make_subspace(Mat<GaussianRational>::identity(n));
}

Subspace kernel_basis(const Mat<GaussianRational>& m) {
  Subspace out;
  out.ambient_dim = m.cols();
  out.basis = kernel(m);
  return out;
}

Mat<GaussianRational> standard_complement(const Mat<GaussianRational>& span,
                                          std::size_t dim) {
  if (span.rows() != dim) {
    fail(ErrorName::DimensionMismatch, "complement ambient size");
  }
  Mat<GaussianRational> current = span;
  std::size_t base_rank = rank(span);
  Mat<GaussianRational> lift(dim, dim - base_rank);
  std::size_t found = 0;
  for (std::size_t i = 0; i < dim && found < lift.cols(); ++i) {
    Mat<GaussianRational> probe(dim, 1);
    probe.at(i, 0) = GaussianRational(1);
    Mat<GaussianRational> widened = hcat(current, probe);
    if (rank(widened) > base_rank + found) {
      lift.at(i, found) = GaussianRational(1);
      current = std::move(widened);
      ++found;
    }
  }
  if (found < lift.cols()) {
    fail(ErrorName::ConditionViolated, "complement incomplete");
  }
  return lift;
}

std::size_t nilpotency_height(const Mat<GaussianRational>& n) {
  if (n.rows() != n.cols()) {
    fail(ErrorName::DimensionMismatch, "nilpotency of a nonsquare matrix");
  }
  Mat<GaussianRational> p = n;
  std::size_t h = 1;
  while (!p.is_zero()) {
    if (h > n.rows()) {
      fail(ErrorName::NotNilpotent, "no vanishing power within dimension");
    }
    p = p * n;
    ++h;
  }
  return h - 1;
}

Subspace generalized_zero_eigenspace(const Mat<GaussianRational>& y) {
  if (y.rows() != y.cols()) {
    fail(ErrorName::DimensionMismatch, "generalized eigenspace");
  }
  return kernel_basis(mpow(y, y.rows()));
}

Mat<GaussianRational> restrict_to(const Mat<GaussianRational>& n,
                                  const Subspace& w) {
  if (n.rows() != w.ambient_dim || n.rows() != n.cols()) {
    fail(ErrorName::DimensionMismatch, "restriction shapes");
  }
  std::optional<Mat<GaussianRational>> coords =
      solve_matrix(w.basis, n * w.basis);
  if (!coords) {
    fail(ErrorName::NotInvariant, "N does not preserve the subspace");
  }
  return *coords;
}

std::vector<Chain> uniform_chain_basis(const Mat<GaussianRational>& n,
                                       const Subspace& w) {
  Mat<GaussianRational> a = restrict_to(n, w);
  std::size_t d = w.dim();
  std::vector<Chain> chains;
  if (d == 0) return chains;
  std::size_t h = nilpotency_height(a);

  // Kernel filtration 0 = K_0 < K_1 <= ... <= K_{h+1} = W.
  std::vector<Mat<GaussianRational>> filtration;
  filtration.push_back(Mat<GaussianRational>(d, 0));
  for (std::size_t t = 1; t <= h + 1; ++t) {
    filtration.push_back(kernel(mpow(a, t)));
  }

  struct Top {
    Vec<GaussianRational> v;
    std::size_t length;
  };
  std::vector<Top> tops;
  for (std::size_t level = h + 1; level >= 1; --level) {
    // Span to stay independent of: the previous layer plus the images of
    // longer chains landing in this layer.
    Mat<GaussianRational> blocked = filtration[level - 1];
    for (const Top& t : tops) {
      Vec<GaussianRational> image = t.v;
      for (std::size_t s = 0; s < t.length - level; ++s) image = a * image;
      blocked = hcat(blocked, col_matrix(image));
    }
    std::size_t blocked_rank = rank(blocked);
    const Mat<GaussianRational>& layer = filtration[level];
    for (std::size_t c = 0; c < layer.cols(); ++c) {
      Vec<GaussianRational> candidate = layer.col(c);
      Mat<GaussianRational> probe = hcat(blocked, col_matrix(candidate));
      if (rank(probe) == blocked_rank) continue;
      blocked = std::move(probe);
      ++blocked_rank;
      tops.push_back({std::move(candidate), level});
    }
  }

  std::size_t total = 0;
  for (const Top& t : tops) total += t.length;
  if (total != d) {
    fail(ErrorName::ConditionViolated, "chain extraction lost dimensions");
  }

  for (const Top& t : tops) {
    Chain chain;
    Vec<GaussianRational> cur = w.basis * t.v;
    for (std::size_t s = 0; s < t.length; ++s) {
      chain.vectors.push_back(cur);
      if (s + 1 < t.length) cur = n * cur;
    }
    chains.push_back(std::move(chain));
  }
  return chains;
}

}  // namespace orbitforge
