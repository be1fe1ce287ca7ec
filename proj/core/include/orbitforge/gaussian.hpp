#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "orbitforge/rational.hpp"

namespace orbitforge {

// Element of Q(i); the implementation model of the complex scalars.
class GaussianRational {
public:
  GaussianRational() = default;
  GaussianRational(Rational re) : re_(std::move(re)) {}  // NOLINT
  GaussianRational(long re) : re_(re) {}                 // NOLINT
  GaussianRational(Rational re, Rational im)
      : re_(std::move(re)), im_(std::move(im)) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_one() const { return re_.is_one() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }
  bool is_imaginary() const { return re_.is_zero(); }

  GaussianRational operator-() const { return {-re_, -im_}; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a,
                                    const GaussianRational& b) {
    return a += b;
  }
  friend GaussianRational operator-(GaussianRational a,
                                    const GaussianRational& b) {
    return a -= b;
  }
  friend GaussianRational operator*(GaussianRational a,
                                    const GaussianRational& b) {
    return a *= b;
  }
  friend GaussianRational operator/(GaussianRational a,
                                    const GaussianRational& b) {
    return a /= b;
  }

  friend bool operator==(const GaussianRational& a,
                         const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  // |z|^2, an exact nonnegative rational.
  Rational norm() const { return re_ * re_ + im_ * im_; }

  GaussianRational conjugate() const { return {re_, -im_}; }
  GaussianRational inverse() const;

  std::string str() const;
  size_t hash() const { return std::hash<std::string>{}(str()); }

private:
  Rational re_;
  Rational im_;
};

std::ostream& operator<<(std::ostream& os, const GaussianRational& z);

inline GaussianRational conj(const GaussianRational& z) {
  return z.conjugate();
}

// True when the positive rational is a norm of a Gaussian rational, i.e.
// its squarefree part has no prime factor congruent to 3 mod 4.
bool is_gaussian_norm(const Rational& r);

// Canonical representative of r (> 0) modulo Gaussian norms: the product
// of the 3-mod-4 primes occurring to odd multiplicity in r.
Rational gaussian_norm_class(const Rational& r);

// For a gaussian-norm value r, a Gaussian rational g with |g|^2 = r.
GaussianRational gaussian_norm_witness(const Rational& r);

// Exact square root in Q(i) when z is a square there.
std::optional<GaussianRational> gaussian_sqrt(const GaussianRational& z);

}  // namespace orbitforge

template <>
struct std::hash<orbitforge::GaussianRational> {
  size_t operator()(const orbitforge::GaussianRational& z) const {
    return z.hash();
  }
};
