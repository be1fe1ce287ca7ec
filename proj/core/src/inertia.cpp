#include "orbitforge/inertia.hpp"

#include <utility>
#include <vector>

namespace orbitforge {
namespace {

int real_sign(const Rational& x) { return x.sign(); }
int real_sign(const GaussianRational& x) {
  if (!x.is_real()) fail(ErrorName::ConditionViolated, "congruence pivot is not real");
  return x.re().sign();
}

std::vector<Rational> mixing_scalars(const Rational&) { return {Rational(1)}; }
std::vector<GaussianRational> mixing_scalars(const GaussianRational&) {
  return {GaussianRational(1), GaussianRational::i()};
}

// Symmetric/hermitian congruence diagonalization; only the diagonal signs are
// kept.  Row and column updates are interleaved per row, which reproduces
// E A E* exactly because each column update pre-subtracts the cross term the
// next row update would otherwise double-count.
template <typename K>
Inertia congruence_inertia(Mat<K> a, const char* what) {
  const std::size_t n = a.rows();
  if (a.cols() != n) fail(ErrorName::DimensionMismatch, what);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a.at(j, i) != conj(a.at(i, j))) fail(ErrorName::ConditionViolated, what);

  auto swap_pair = [&](std::size_t x, std::size_t y) {
    a.swap_rows(x, y);
    for (std::size_t r = 0; r < n; ++r) std::swap(a.at(r, x), a.at(r, y));
  };

  Inertia out;
  for (std::size_t k = 0; k < n; ++k) {
    if (a.at(k, k).is_zero()) {
      std::size_t d = k + 1;
      while (d < n && a.at(d, d).is_zero()) ++d;
      if (d < n) {
        swap_pair(k, d);
      } else {
        std::size_t oi = n, oj = n;
        for (std::size_t i = k; i < n && oi == n; ++i)
          for (std::size_t j = i + 1; j < n; ++j)
            if (!a.at(i, j).is_zero()) {
              oi = i;
              oj = j;
              break;
            }
        if (oi == n) {
          out.zero += n - k;
          return out;
        }
        const K c = a.at(oi, oj);
        K mu(0);
        for (const K& m : mixing_scalars(c)) {
          if (!(m * conj(c) + conj(m) * c).is_zero()) {
            mu = m;
            break;
          }
        }
        for (std::size_t j = 0; j < n; ++j) a.at(oi, j) += mu * a.at(oj, j);
        for (std::size_t i = 0; i < n; ++i) a.at(i, oi) += conj(mu) * a.at(i, oj);
        if (oi != k) swap_pair(k, oi);
      }
    }
    if (a.at(k, k).is_zero()) fail(ErrorName::ConditionViolated, "pivot search failed");
    const int s = real_sign(a.at(k, k));
    if (s > 0)
      ++out.positive;
    else
      ++out.negative;
    const K inv = a.at(k, k).inverse();
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a.at(i, k).is_zero()) continue;
      const K f = a.at(i, k) * inv;
      for (std::size_t j = k; j < n; ++j) a.at(i, j) -= f * a.at(k, j);
      for (std::size_t r = k; r < n; ++r) a.at(r, i) -= conj(f) * a.at(r, k);
    }
  }
  return out;
}

}  // namespace

Inertia symmetric_inertia(const Mat<Rational>& a) {
  return congruence_inertia(a, "symmetric inertia input");
}

Inertia hermitian_inertia(const Mat<GaussianRational>& a) {
  return congruence_inertia(a, "hermitian inertia input");
}

}  // namespace orbitforge
