#include <orbitforge/triple.hpp>

#include <sstream>
#include <utility>

#include <orbitforge/errors.hpp>

namespace orbitforge {
namespace {

Vec<GaussianRational> column(const Mat<GaussianRational>& m, std::size_t j) {
  Vec<GaussianRational> v(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m.at(i, j);
  return v;
}

std::string join(const std::vector<std::string>& parts) {
  std::ostringstream os;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) os << "; ";
    os << parts[i];
  }
  return os.str();
}

// Root of q + t s + t^2 qk over the allowed scalar field.
std::optional<GaussianRational> bilinear_shift(const GaussianRational& q,
                                               const GaussianRational& s,
                                               const GaussianRational& qk,
                                               bool real_scalars) {
  auto admissible = [&](const GaussianRational& t) {
    return !real_scalars || t.is_real();
  };
  if (qk.is_zero()) {
    if (s.is_zero()) return std::nullopt;
    GaussianRational t = -q / s;
    if (admissible(t)) return t;
    return std::nullopt;
  }
  GaussianRational disc = s * s - GaussianRational(4) * q * qk;
  std::optional<GaussianRational> d;
  if (real_scalars) {
    if (!disc.is_real()) return std::nullopt;
    if (auto r = rational_sqrt(disc.re())) d = GaussianRational(*r);
  } else {
    d = gaussian_sqrt(disc);
  }
  if (!d) return std::nullopt;
  for (const auto& root : {(-s + *d) / (GaussianRational(2) * qk),
                           (-s - *d) / (GaussianRational(2) * qk)}) {
    if (admissible(root)) return root;
  }
  return std::nullopt;
}

// Root c of q + 2 Re(c b) + |c|^2 qk with q, qk real.
std::optional<GaussianRational> hermitian_shift(const Rational& q,
                                                const GaussianRational& b,
                                                const Rational& qk) {
  if (!b.is_zero()) {
    Rational n = b.norm();
    if (qk.is_zero()) {
      Rational t = -q / (Rational(2) * n);
      return GaussianRational(t) * conj(b);
    }
    Rational a2 = n * qk;
    Rational a1 = Rational(2) * n;
    Rational disc = a1 * a1 - Rational(4) * a2 * q;
    if (auto d = rational_sqrt(disc)) {
      Rational t = (-a1 + *d) / (Rational(2) * a2);
      return GaussianRational(t) * conj(b);
    }
    return std::nullopt;
  }
  if (qk.is_zero()) return std::nullopt;
  Rational target = -q / qk;
  if (target.sign() > 0 && is_gaussian_norm(target))
    return gaussian_norm_witness(target);
  return std::nullopt;
}

struct SearchDetail {
  std::size_t h = 0;
  Vec<GaussianRational> witness;  // carrier coordinates
  GaussianRational mu0;
  std::optional<GaussianRational> sector;
  std::vector<Vec<GaussianRational>> directions;  // solution-flat kernel
};

SearchDetail detail_search(const Triple& t) {
  const Pair& p = t.pair;
  auto v0c = solve(p.carrier.basis, t.v0);
  if (!v0c)
    fail(ErrorName::NoDistinguishedHeight, "marked vector outside the carrier");
  SpecialReport rep = is_special_vector(p.space, t.v0);
  if (!rep.special)
    fail(ErrorName::NoDistinguishedHeight,
         "marked vector is not special: " + join(rep.failures));

  const StructuredSpace& sp = p.on_carrier;
  const std::size_t m = p.carrier.dim();
  std::vector<Mat<GaussianRational>> powers;
  powers.reserve(m);
  powers.push_back(Mat<GaussianRational>::identity(m));
  for (std::size_t k = 1; k < m; ++k) powers.push_back(p.a * powers.back());

  auto sectors = sector_bases(sp);
  for (std::size_t h = m; h-- > 0;) {
    for (const auto& sec : sectors) {
      Mat<GaussianRational> a = powers[h] * sec.basis;
      Vec<GaussianRational> w;
      std::vector<Vec<GaussianRational>> dirs;
      if (sec.real_coefficients) {
        auto c = solve_real(a, *v0c);
        if (!c) continue;
        w = sec.basis * to_gaussian(*c);
        Mat<Rational> ker = kernel(realify_columns(a));
        for (std::size_t j = 0; j < ker.cols(); ++j) {
          Vec<Rational> rc(ker.rows());
          for (std::size_t i = 0; i < ker.rows(); ++i) rc[i] = ker.at(i, j);
          dirs.push_back(sec.basis * to_gaussian(rc));
        }
      } else {
        auto c = solve(a, *v0c);
        if (!c) continue;
        w = sec.basis * *c;
        Mat<GaussianRational> ker = kernel(a);
        for (std::size_t j = 0; j < ker.cols(); ++j)
          dirs.push_back(sec.basis * column(ker, j));
      }
      // v0 lies in the flat's kernel when it sits in the searched sector.
      std::vector<Vec<GaussianRational>> candidates = dirs;
      bool same_sector = !sp.sigma || !sec.eigenvalue ||
                         (rep.sigma_eigenvalue &&
                          *sec.eigenvalue == *rep.sigma_eigenvalue);
      if (h >= 1 && same_sector) candidates.insert(candidates.begin(), *v0c);
      auto repaired = repair_isotropy(sp, w, candidates, sec.real_coefficients);
      if (!repaired) continue;
      GaussianRational mu0 =
          sp.form ? evaluate_form(*sp.form, *repaired, *v0c)
                  : GaussianRational(1);
      return {h, *repaired, mu0, sec.eigenvalue, std::move(dirs)};
    }
  }
  fail(ErrorName::NoDistinguishedHeight,
       "no special solution at any height");
}

}  // namespace

std::optional<Vec<GaussianRational>> repair_isotropy(
    const StructuredSpace& space, const Vec<GaussianRational>& w,
    const std::vector<Vec<GaussianRational>>& candidates, bool real_scalars) {
  if (!space.form) return w;
  const Form& f = *space.form;
  GaussianRational q = evaluate_form(f, w, w);
  if (q.is_zero()) return w;
  if (f.kind == FormKind::Alternating) return std::nullopt;
  const bool herm = f.kind == FormKind::Hermitian;

  auto try_shift =
      [&](const Vec<GaussianRational>& k) -> std::optional<Vec<GaussianRational>> {
    GaussianRational qk = evaluate_form(f, k, k);
    std::optional<GaussianRational> c;
    if (herm) {
      c = hermitian_shift(q.re(), evaluate_form(f, w, k), qk.re());
    } else {
      GaussianRational s = evaluate_form(f, w, k) + evaluate_form(f, k, w);
      c = bilinear_shift(q, s, qk, real_scalars);
    }
    if (!c) return std::nullopt;
    Vec<GaussianRational> r = vec_add(w, vec_scale(*c, k));
    if (evaluate_form(f, r, r).is_zero()) return r;
    return std::nullopt;
  };

  for (const auto& k : candidates)
    if (auto r = try_shift(k)) return r;
  std::vector<GaussianRational> mixes = {GaussianRational(1),
                                         GaussianRational(-1)};
  if (!real_scalars) {
    mixes.push_back(GaussianRational::i());
    mixes.push_back(-GaussianRational::i());
  }
  for (std::size_t i = 0; i < candidates.size(); ++i)
    for (std::size_t j = i + 1; j < candidates.size(); ++j)
      for (const auto& s : mixes)
        if (auto r = try_shift(
                vec_add(candidates[i], vec_scale(s, candidates[j]))))
          return r;
  return std::nullopt;
}

Triple make_triple(Pair pair, Vec<GaussianRational> v0) {
  if (v0.size() != pair.space.dim)
    fail(ErrorName::DimensionMismatch, "marked vector length");
  if (vec_is_zero(v0)) fail(ErrorName::ZeroVector, "marked vector");
  if (!solve(pair.carrier.basis, v0))
    fail(ErrorName::NotInvariant, "marked vector outside the carrier");
  SpecialReport rep = is_special_vector(pair.space, v0);
  if (!rep.special)
    fail(ErrorName::NotSpecial, join(rep.failures));
  if (!vec_is_zero(pair.y * v0))
    fail(ErrorName::ConditionViolated,
         "the operator does not annihilate the marked vector");
  return Triple{std::move(pair), std::move(v0), rep.sigma_eigenvalue};
}

HeightSearch distinguished_height_search(const Triple& t) {
  SearchDetail d = detail_search(t);
  return {d.h, t.pair.carrier.basis * d.witness, d.mu0, d.sector};
}

std::size_t distinguished_height(const Triple& t) {
  return detail_search(t).h;
}

ParameterSet parameter_set(const Triple& t, std::size_t h) {
  SearchDetail d = detail_search(t);
  if (d.h != h)
    fail(ErrorName::EmptyParameterSet, "h is not the distinguished height");
  Vec<GaussianRational> witness = t.pair.carrier.basis * d.witness;
  const StructuredSpace& sp = t.pair.on_carrier;
  if (!sp.form) return {GaussianRational(1), ParameterClosure::RealScaleClass,
                        std::move(witness)};
  // Kernel directions pair to zero against v0, so the attainable set is the
  // single value mu0.
  auto v0c = solve(t.pair.carrier.basis, t.v0);
  for (const auto& k : d.directions) {
    if (!evaluate_form(*sp.form, k, *v0c).is_zero())
      fail(ErrorName::EmptyParameterSet,
           "kernel direction contributes a nonzero linear term");
  }
  return {d.mu0, ParameterClosure::Singleton, std::move(witness)};
}

}  // namespace orbitforge
