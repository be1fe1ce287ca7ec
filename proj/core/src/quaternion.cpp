#include "orbitforge/quaternion.hpp"

#include <ostream>

#include "orbitforge/errors.hpp"

namespace orbitforge {

RationalQuaternion RationalQuaternion::inverse() const {
  if (is_zero()) fail(ErrorName::ParseError, "inverse of zero");
  Rational n = norm();
  RationalQuaternion c = conjugate();
  GaussianRational scale(n.inverse());
  return {c.complex_part() * scale, c.j_part() * scale};
}

std::string RationalQuaternion::str() const {
  if (b_.is_zero()) return a_.str();
  return a_.str() + "+(" + b_.str() + ")*j";
}

std::ostream& operator<<(std::ostream& os, const RationalQuaternion& q) {
  return os << q.str();
}

RationalQuaternion quaternion_norm_witness(const Rational& r) {
  if (r.sign() <= 0)
    fail(ErrorName::ParseError, "norm witness needs a positive value");
  // r = (num*den)/den^2; write num*den = a^2 + b^2 + (two squares) by
  // scanning a, b and finishing with a Gaussian norm witness.
  mpz_class n = r.numerator() * r.denominator();
  mpq_class den(r.denominator());
  for (mpz_class a = 0; a * a <= n; ++a) {
    for (mpz_class b = a; a * a + b * b <= n; ++b) {
      Rational rem(mpq_class(n - a * a - b * b));
      if (rem.is_zero()) {
        return {GaussianRational(Rational(mpq_class(a) / den),
                                 Rational(mpq_class(b) / den)),
                GaussianRational(0)};
      }
      if (is_gaussian_norm(rem)) {
        GaussianRational g = gaussian_norm_witness(rem);
        GaussianRational scale{Rational(1 / den), Rational(0)};
        return {GaussianRational(Rational(mpq_class(a) / den),
                                 Rational(mpq_class(b) / den)),
                g * scale};
      }
    }
  }
  fail(ErrorName::ParseError, "four-square scan failed: " + r.str());
}

}  // namespace orbitforge
