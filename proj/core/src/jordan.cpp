#include <orbitforge/jordan.hpp>

#include <algorithm>
#include <set>
#include <utility>

#include <orbitforge/errors.hpp>

namespace orbitforge {

namespace {

using Poly = std::vector<GaussianRational>;  // c[k] multiplies x^k, monic

GaussianRational poly_eval(const Poly& p, const GaussianRational& x) {
  GaussianRational acc;
  for (std::size_t k = p.size(); k-- > 0;) {
    acc = acc * x + p[k];
  }
  return acc;
}

// Exact division by (x - r); the remainder must vanish.
Poly poly_deflate(const Poly& p, const GaussianRational& r) {
  Poly q(p.size() - 1);
  GaussianRational carry;
  for (std::size_t k = p.size(); k-- > 1;) {
    carry = p[k] + carry * r;
    q[k - 1] = carry;
  }
  if (!(p[0] + carry * r).is_zero()) {
    fail(ErrorName::ConditionViolated, "deflation by a non-root");
  }
  return q;
}

std::vector<std::pair<mpz_class, unsigned>> factor_integer(mpz_class n) {
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

std::vector<mpz_class> divisors(const mpz_class& n) {
  std::vector<mpz_class> out{1};
  for (const auto& [p, c] : factor_integer(n)) {
    std::size_t base = out.size();
    mpz_class pw = 1;
    for (unsigned e = 1; e <= c; ++e) {
      pw *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pw);
    }
    if (out.size() > 200000) {
      fail(ErrorName::ConditionViolated, "divisor enumeration budget");
    }
  }
  return out;
}

// Gaussian rationals r with q(r) possibly zero: r = (x + y i)/denom where
// x^2 + y^2 divides the norm of the scaled constant coefficient.
std::vector<GaussianRational> root_candidates(const Poly& p) {
  std::size_t deg = p.size() - 1;
  mpz_class denom = 1;
  for (const GaussianRational& c : p) {
    mpz_class d1 = c.re().denominator();
    mpz_class d2 = c.im().denominator();
    mpz_class g;
    mpz_lcm(g.get_mpz_t(), denom.get_mpz_t(), d1.get_mpz_t());
    denom = g;
    mpz_lcm(g.get_mpz_t(), denom.get_mpz_t(), d2.get_mpz_t());
    denom = g;
  }
  mpz_class scale;
  mpz_pow_ui(scale.get_mpz_t(), denom.get_mpz_t(), deg);
  Rational scale_r{mpq_class(scale)};
  GaussianRational q0 = p[0] * GaussianRational(scale_r);
  mpz_class m = q0.norm().numerator();

  std::set<std::pair<std::string, std::string>> seen;
  std::vector<GaussianRational> out;
  auto push = [&](const mpz_class& x, const mpz_class& y) {
    Rational re{mpq_class(x, denom)};
    Rational im{mpq_class(y, denom)};
    GaussianRational r(re, im);
    if (seen.insert({re.str(), im.str()}).second) out.push_back(r);
  };
  for (const mpz_class& k : divisors(m)) {
    mpz_class x = 0;
    while (x * x * 2 <= k) {
      mpz_class y2 = k - x * x;
      mpz_class y;
      mpz_sqrt(y.get_mpz_t(), y2.get_mpz_t());
      if (y * y == y2) {
        for (int sx : {1, -1}) {
          for (int sy : {1, -1}) {
            push(sx * x, sy * y);
            push(sx * y, sy * x);
          }
        }
      }
      ++x;
    }
  }
  return out;
}

}  // namespace

std::optional<std::vector<EigenvalueData>> rational_spectrum(
    const Mat<GaussianRational>& y) {
  if (y.rows() != y.cols()) {
    fail(ErrorName::DimensionMismatch, "spectrum of a nonsquare matrix");
  }
  std::vector<EigenvalueData> found;
  if (y.rows() == 0) return found;
  Poly p = char_poly(y);

  std::size_t zero_mult = 0;
  while (p.size() > 1 && p[0].is_zero()) {
    p.erase(p.begin());
    ++zero_mult;
  }
  if (zero_mult > 0) found.push_back({GaussianRational(0), zero_mult});

  if (p.size() > 1) {
    for (const GaussianRational& r : root_candidates(p)) {
      std::size_t mult = 0;
      while (p.size() > 1 && poly_eval(p, r).is_zero()) {
        p = poly_deflate(p, r);
        ++mult;
      }
      if (mult > 0) found.push_back({r, mult});
      if (p.size() == 1) break;
    }
    if (p.size() > 1) return std::nullopt;
  }

  std::sort(found.begin(), found.end(),
            [](const EigenvalueData& a, const EigenvalueData& b) {
              if (a.value.re() != b.value.re()) {
                return a.value.re() < b.value.re();
              }
              return a.value.im() < b.value.im();
            });
  return found;
}

std::optional<std::vector<SpectralBlock>> jordan_structure(
    const Mat<GaussianRational>& y) {
  std::optional<std::vector<EigenvalueData>> spectrum = rational_spectrum(y);
  if (!spectrum) return std::nullopt;
  std::size_t n = y.rows();
  std::vector<SpectralBlock> out;
  for (const EigenvalueData& ev : *spectrum) {
    Mat<GaussianRational> shifted = y;
    for (std::size_t i = 0; i < n; ++i) shifted.at(i, i) -= ev.value;
    // New kernel dimension at each power, weakly decreasing; the block
    // partition is its conjugate.
    std::vector<std::size_t> layer;
    std::size_t prev = 0;
    Mat<GaussianRational> power = Mat<GaussianRational>::identity(n);
    while (true) {
      power = power * shifted;
      std::size_t k = n - rank(power);
      if (k <= prev) {
        fail(ErrorName::ConditionViolated, "kernel filtration stalled");
      }
      layer.push_back(k - prev);
      if (k == ev.multiplicity) break;
      prev = k;
    }
    SpectralBlock block{ev.value, {}};
    for (std::size_t t = 0; t < layer.size(); ++t) {
      std::size_t next = t + 1 < layer.size() ? layer[t + 1] : 0;
      for (std::size_t c = 0; c < layer[t] - next; ++c) {
        block.block_sizes.push_back(t + 1);
      }
    }
    std::sort(block.block_sizes.rbegin(), block.block_sizes.rend());
    out.push_back(std::move(block));
  }
  return out;
}

JordanDecomposition jordan_decomposition(const Mat<GaussianRational>& y) {
  std::optional<std::vector<EigenvalueData>> spectrum = rational_spectrum(y);
  if (!spectrum) {
    fail(ErrorName::IrrationalSpectrum,
         "characteristic polynomial does not split over Q(i)");
  }
  std::size_t n = y.rows();
  Mat<GaussianRational> basis(n, 0);
  std::vector<GaussianRational> diag;
  for (const EigenvalueData& ev : *spectrum) {
    Mat<GaussianRational> shifted = y;
    for (std::size_t i = 0; i < n; ++i) shifted.at(i, i) -= ev.value;
    Mat<GaussianRational> space = kernel(mpow(shifted, ev.multiplicity));
    if (space.cols() != ev.multiplicity) {
      fail(ErrorName::ConditionViolated, "generalized eigenspace dimension");
    }
    basis = hcat(basis, space);
    for (std::size_t c = 0; c < ev.multiplicity; ++c) diag.push_back(ev.value);
  }
  Mat<GaussianRational> d(n, n);
  for (std::size_t i = 0; i < n; ++i) d.at(i, i) = diag[i];
  std::optional<Mat<GaussianRational>> b_inv = inverse(basis);
  if (!b_inv) {
    fail(ErrorName::ConditionViolated, "eigenbasis not invertible");
  }
  JordanDecomposition out;
  out.semisimple = basis * d * *b_inv;
  out.nilpotent = y - out.semisimple;
  if (out.semisimple * out.nilpotent != out.nilpotent * out.semisimple ||
      !mpow(out.nilpotent, n).is_zero()) {
    fail(ErrorName::ConditionViolated, "decomposition identities failed");
  }
  return out;
}

}  // namespace orbitforge
