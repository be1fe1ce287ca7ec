#pragma once

#include <iosfwd>
#include <string>

#include "orbitforge/gaussian.hpp"

namespace orbitforge {

// Quaternion in the complex-pair model H = { a + b j : a, b in Q(i) },
// with j^2 = -1 and a j = j conj(a).
class RationalQuaternion {
public:
  RationalQuaternion() = default;
  RationalQuaternion(GaussianRational a) : a_(std::move(a)) {}  // NOLINT
  RationalQuaternion(long a) : a_(a) {}                         // NOLINT
  RationalQuaternion(GaussianRational a, GaussianRational b)
      : a_(std::move(a)), b_(std::move(b)) {}

  static RationalQuaternion i() { return {GaussianRational::i(), 0}; }
  static RationalQuaternion j() { return {0, 1}; }
  static RationalQuaternion k() {
    return {0, GaussianRational::i()};  // k = i j
  }

  const GaussianRational& complex_part() const { return a_; }
  const GaussianRational& j_part() const { return b_; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool is_complex() const { return b_.is_zero(); }
  bool is_real() const { return b_.is_zero() && a_.is_real(); }

  RationalQuaternion operator-() const { return {-a_, -b_}; }

  RationalQuaternion& operator+=(const RationalQuaternion& o) {
    a_ += o.a_;
    b_ += o.b_;
    return *this;
  }
  RationalQuaternion& operator-=(const RationalQuaternion& o) {
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
  }
  // (a + bj)(c + dj) = (ac - b conj(d)) + (ad + b conj(c)) j
  RationalQuaternion& operator*=(const RationalQuaternion& o) {
    GaussianRational na = a_ * o.a_ - b_ * o.b_.conjugate();
    GaussianRational nb = a_ * o.b_ + b_ * o.a_.conjugate();
    a_ = std::move(na);
    b_ = std::move(nb);
    return *this;
  }

  friend RationalQuaternion operator+(RationalQuaternion x,
                                      const RationalQuaternion& y) {
    return x += y;
  }
  friend RationalQuaternion operator-(RationalQuaternion x,
                                      const RationalQuaternion& y) {
    return x -= y;
  }
  friend RationalQuaternion operator*(RationalQuaternion x,
                                      const RationalQuaternion& y) {
    return x *= y;
  }

  friend bool operator==(const RationalQuaternion& x,
                         const RationalQuaternion& y) {
    return x.a_ == y.a_ && x.b_ == y.b_;
  }

  // The anti-involution x^q = a - conj(b) j; satisfies (xy)^q = y^q x^q.
  RationalQuaternion anti_involution() const {
    return {a_, -b_.conjugate()};
  }

  // Standard quaternion conjugate: conj(a) - b j.
  RationalQuaternion conjugate() const { return {a_.conjugate(), -b_}; }

  // x conj(x) = |a|^2 + |b|^2 as a rational scalar.
  Rational norm() const { return a_.norm() + b_.norm(); }

  RationalQuaternion inverse() const;

  std::string str() const;
  size_t hash() const { return std::hash<std::string>{}(str()); }

private:
  GaussianRational a_;
  GaussianRational b_;
};

std::ostream& operator<<(std::ostream& os, const RationalQuaternion& q);

// A quaternion of norm r, for any positive rational r (Lagrange over Q).
RationalQuaternion quaternion_norm_witness(const Rational& r);

}  // namespace orbitforge

template <>
struct std::hash<orbitforge::RationalQuaternion> {
  size_t operator()(const orbitforge::RationalQuaternion& q) const {
    return q.hash();
  }
};
