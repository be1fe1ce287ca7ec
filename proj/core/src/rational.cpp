#include "orbitforge/rational.hpp"

#include <ostream>

#include "orbitforge/errors.hpp"

namespace orbitforge {

Rational::Rational(long num, long den) {
  if (den == 0) fail(ErrorName::ParseError, "zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) fail(ErrorName::ParseError, "division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::inverse() const {
  if (is_zero()) fail(ErrorName::ParseError, "inverse of zero");
  return Rational(mpq_class(1) / v_);
}

Rational Rational::from_string(const std::string& text) {
  if (text.empty()) fail(ErrorName::ParseError, "empty rational");
  size_t start = (text[0] == '+' || text[0] == '-') ? 1 : 0;
  if (start == text.size()) fail(ErrorName::ParseError, "bare sign: " + text);
  bool seen_slash = false;
  for (size_t i = start; i < text.size(); ++i) {
    char c = text[i];
    if (c == '/') {
      if (seen_slash || i == start || i + 1 == text.size())
        fail(ErrorName::ParseError, "malformed rational: " + text);
      seen_slash = true;
    } else if (c < '0' || c > '9') {
      fail(ErrorName::ParseError, "malformed rational: " + text);
    }
  }
  mpq_class v;
  std::string body = (text[0] == '+') ? text.substr(1) : text;
  if (v.set_str(body, 10) != 0)
    fail(ErrorName::ParseError, "malformed rational: " + text);
  if (v.get_den() == 0) fail(ErrorName::ParseError, "zero denominator: " + text);
  v.canonicalize();
  return Rational(v);
}

Rational Rational::squarefree_class() const {
  if (is_zero()) return Rational(0);
  // num/den ~ num*den modulo squares.
  mpz_class n = numerator() * denominator();
  int sign = sgn(n) < 0 ? -1 : 1;
  n = ::abs(n);
  mpz_class out = 1;
  mpz_class p = 2;
  mpz_class n_left = n;
  while (p * p <= n_left) {
    unsigned count = 0;
    while (n_left % p == 0) {
      n_left /= p;
      ++count;
    }
    if (count % 2 == 1) out *= p;
    p += (p == 2) ? 1 : 2;
  }
  out *= n_left;
  return Rational(mpq_class(sign * out));
}

std::string Rational::str() const { return v_.get_str(); }

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

std::optional<Rational> rational_sqrt(const Rational& r) {
  if (r.sign() < 0) return std::nullopt;
  mpz_class num = r.numerator(), den = r.denominator();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0 ||
      mpz_perfect_square_p(den.get_mpz_t()) == 0)
    return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  return Rational(mpq_class(rn) / mpq_class(rd));
}

}  // namespace orbitforge
