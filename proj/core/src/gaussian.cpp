#include "orbitforge/gaussian.hpp"

#include <ostream>
#include <utility>
#include <vector>

#include "orbitforge/errors.hpp"

namespace orbitforge {

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) fail(ErrorName::ParseError, "division by zero");
  Rational n = o.norm();
  GaussianRational num = *this * o.conjugate();
  re_ = num.re() / n;
  im_ = num.im() / n;
  return *this;
}

GaussianRational GaussianRational::inverse() const {
  if (is_zero()) fail(ErrorName::ParseError, "inverse of zero");
  Rational n = norm();
  return {re_ / n, -im_ / n};
}

std::string GaussianRational::str() const {
  if (im_.is_zero()) return re_.str();
  std::string imag = im_.abs().str() + "*i";
  if (re_.is_zero()) return (im_.sign() < 0 ? "-" : "") + imag;
  return re_.str() + (im_.sign() < 0 ? "-" : "+") + imag;
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& z) {
  return os << z.str();
}

namespace {

std::vector<std::pair<mpz_class, unsigned>> factor(mpz_class n) {
  std::vector<std::pair<mpz_class, unsigned>> out;
  mpz_class p = 2;
  while (p * p <= n) {
    if (n % p == 0) {
      unsigned c = 0;
      while (n % p == 0) {
        n /= p;
        ++c;
      }
      out.emplace_back(p, c);
    }
    p += (p == 2) ? 1 : 2;
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

// Some (a, b) with a^2 + b^2 = p for a prime p = 2 or p % 4 == 1.
std::pair<mpz_class, mpz_class> two_squares(const mpz_class& p) {
  if (p == 2) return {1, 1};
  // Find x with x^2 = -1 mod p, then descend.
  mpz_class x = 0;
  for (mpz_class c = 2; c < p; ++c) {
    mpz_class e = (p - 1) / 4;
    mpz_class candidate;
    mpz_powm(candidate.get_mpz_t(), c.get_mpz_t(), e.get_mpz_t(),
             p.get_mpz_t());
    if ((candidate * candidate) % p == p - 1) {
      x = candidate;
      break;
    }
  }
  if (x == 0) fail(ErrorName::GenerationFailed, "two-squares root search");
  // Gaussian gcd descent: gcd(p, x + i).
  mpz_class a = p, b = 0, c = x, d = 1;
  while (c != 0 || d != 0) {
    mpz_class n = c * c + d * d;
    if (n == 0) break;
    // round((a + bi)(c - di) / n)
    mpz_class qr_num = a * c + b * d;
    mpz_class qi_num = b * c - a * d;
    auto round_div = [](const mpz_class& num, const mpz_class& den) {
      mpz_class q, r;
      mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(),
                  den.get_mpz_t());
      if (2 * r >= den) q += 1;
      return q;
    };
    mpz_class qr = round_div(qr_num, n);
    mpz_class qi = round_div(qi_num, n);
    mpz_class rr = a - (qr * c - qi * d);
    mpz_class ri = b - (qr * d + qi * c);
    a = c;
    b = d;
    c = rr;
    d = ri;
  }
  return {::abs(a), ::abs(b)};
}

}  // namespace

bool is_gaussian_norm(const Rational& r) {
  if (r.sign() <= 0) return false;
  mpz_class n = r.numerator() * r.denominator();
  for (const auto& [p, c] : factor(n)) {
    if (c % 2 == 1 && p % 4 == 3) return false;
  }
  return true;
}

Rational gaussian_norm_class(const Rational& r) {
  if (r.sign() <= 0)
    fail(ErrorName::ParseError, "norm class of nonpositive value");
  mpz_class n = r.numerator() * r.denominator();
  mpz_class out = 1;
  for (const auto& [p, c] : factor(n)) {
    if (c % 2 == 1 && p % 4 == 3) out *= p;
  }
  return Rational(mpq_class(out));
}

GaussianRational gaussian_norm_witness(const Rational& r) {
  if (!is_gaussian_norm(r))
    fail(ErrorName::ParseError, "not a Gaussian norm: " + r.str());
  // r = num/den = num*den / den^2; split num*den = s^2 * m with m
  // squarefree (every prime of m is 2 or 1 mod 4).
  mpz_class n = r.numerator() * r.denominator();
  mpz_class s = 1, m = 1;
  for (const auto& [p, c] : factor(n)) {
    for (unsigned k = 0; k < c / 2; ++k) s *= p;
    if (c % 2 == 1) m *= p;
  }
  mpz_class wr = s, wi = 0;
  for (const auto& [p, c] : factor(m)) {
    (void)c;
    auto [x, y] = two_squares(p);
    mpz_class nr = wr * x - wi * y;
    mpz_class ni = wr * y + wi * x;
    wr = nr;
    wi = ni;
  }
  Rational den(mpq_class(r.denominator()));
  return {Rational(mpq_class(wr)) / den, Rational(mpq_class(wi)) / den};
}

std::optional<GaussianRational> gaussian_sqrt(const GaussianRational& z) {
  if (z.im().is_zero()) {
    if (auto r = rational_sqrt(z.re())) return GaussianRational(*r);
    if (auto r = rational_sqrt(-z.re()))
      return GaussianRational(Rational(0), *r);
    return std::nullopt;
  }
  auto n = rational_sqrt(z.norm());
  if (!n) return std::nullopt;
  auto u = rational_sqrt((z.re() + *n) / Rational(2));
  if (!u || u->is_zero()) return std::nullopt;
  GaussianRational w(*u, z.im() / (Rational(2) * *u));
  if (w * w == z) return w;
  return std::nullopt;
}

}  // namespace orbitforge
