#include <orbitforge/classify.hpp>

#include <utility>

#include <orbitforge/errors.hpp>

namespace orbitforge {
namespace {

using GMat = Mat<GaussianRational>;
using G = GaussianRational;

// Top anti-diagonal moments of the marked core block: the single-chain
// moments carry the modulus, the double-chain rows have their fixed block
// Gram.
GMat core_moment(const DistinguishedLabel& l) {
  G e(l.eps.value_or(1));
  G lam = l.modulus ? G(*l.modulus) : G(1);
  G i = G::i();
  bool even = l.h % 2 == 0;
  bool single = l.kind == TypeKind::Single;
  GMat plus_minus{{G(0), G(1)}, {G(1), G(0)}};
  GMat paired{{G(0), G(1)}, {G(-1), G(0)}};
  switch (l.family) {
    case Family::GlSigmaPlus:
    case Family::GlSigmaMinus:
      return {};
    case Family::GlTauStar:
      if (single) return even ? GMat{{e * lam}} : GMat{{G(0) - i * e * lam}};
      return plus_minus;
    case Family::OSigmaPlus:
      if (single) return GMat{{e * lam}};
      return even ? plus_minus : paired;
    case Family::SpSigmaPlus:
      if (single) return GMat{{e * lam}};
      return even ? paired : plus_minus;
    case Family::OSigmaMinus:
      return even ? GMat::identity(2) : GMat{{G(0), G(0) - e}, {e, G(0)}};
    case Family::SpSigmaMinus:
      return even ? GMat{{G(0), G(0) - e}, {e, G(0)}} : GMat::identity(2);
  }
  return {};
}

}  // namespace

bool gauge_rigid(const DistinguishedLabel& core) {
  // gl_sigma_minus admits the swap [[0,i],[-i,0]] per chain level; for every
  // form-carrying family the sigma-eigenvalue of v0 is pinned (sigma_+ by
  // anti-linearity, sigma_- by the invariant tau(w, Y^h sigma w)).
  switch (core.family) {
    case Family::GlSigmaMinus:
    case Family::GlTauStar:
      return false;
    default:
      return true;
  }
}

DistinguishedLabel canonical_label(DistinguishedLabel label) {
  if (label.family == Family::GlSigmaPlus && label.modulus)
    label.modulus = Rational(1);
  return label;
}

Triple synthesize_distinguished(const DistinguishedLabel& core,
                                const std::vector<TypeLabel>& residual) {
  std::optional<int> ssign = family_sigma_sign(core.family);
  G gauge = (ssign && *ssign == -1) ? G::i() : G(1);
  return synthesize_distinguished(core, residual, gauge);
}

Triple synthesize_distinguished(const DistinguishedLabel& core,
                                const std::vector<TypeLabel>& residual,
                                const GaussianRational& gauge) {
  validate_distinguished_label(core);
  std::optional<int> ssign = family_sigma_sign(core.family);
  bool negate = false;
  if (ssign) {
    G plus = *ssign == 1 ? G(1) : G::i();
    if (gauge == plus)
      negate = false;
    else if (gauge == -plus)
      negate = true;
    else
      fail(ErrorName::ConditionViolated,
           "sigma-eigenvalue outside the family's condition");
  }

  const std::size_t m = core.h + 1;
  const std::size_t ch = core.chain_count();
  const std::size_t cdim = core.block_dim();

  std::optional<Pair> res;
  std::size_t rdim = 0;
  if (!residual.empty()) {
    res = synthesize_types(core.family, residual);
    rdim = res->space.dim;
  }
  const std::size_t n = cdim + rdim;

  GMat y(n, n);
  GMat s(n, n);
  GMat t(n, n);
  auto idx = [&](std::size_t c, std::size_t a) { return c * m + a; };
  for (std::size_t c = 0; c < ch; ++c)
    for (std::size_t a = 0; a + 1 < m; ++a)
      y.at(idx(c, a + 1), idx(c, a)) = G(1);
  if (ssign) {
    G unit(negate ? -1 : 1);
    if (*ssign == 1) {
      for (std::size_t c = 0; c < ch; ++c)
        for (std::size_t a = 0; a < m; ++a)
          s.at(idx(c, a), idx(c, a)) = unit;
    } else {
      for (std::size_t a = 0; a < m; ++a) {
        s.at(idx(1, a), idx(0, a)) = unit;
        s.at(idx(0, a), idx(1, a)) = G(0) - unit;
      }
    }
  }
  if (family_has_form(core.family)) {
    GMat mu = core_moment(core);
    bool hermitian = core.family == Family::GlTauStar;
    for (std::size_t x = 0; x < ch; ++x) {
      for (std::size_t yy = 0; yy < ch; ++yy) {
        if (mu.at(x, yy).is_zero()) continue;
        for (std::size_t a = 0; a <= core.h; ++a) {
          std::size_t b = core.h - a;
          G value = a % 2 == 0 ? mu.at(x, yy) : G(0) - mu.at(x, yy);
          if (hermitian)
            t.at(idx(x, a), idx(yy, b)) = value;
          else
            t.at(idx(yy, b), idx(x, a)) = value;
        }
      }
    }
  }
  if (rdim) {
    for (std::size_t i = 0; i < rdim; ++i)
      for (std::size_t j = 0; j < rdim; ++j) {
        if (!res->y.at(i, j).is_zero()) y.at(cdim + i, cdim + j) = res->y.at(i, j);
        if (res->space.sigma && !res->space.sigma->s.at(i, j).is_zero())
          s.at(cdim + i, cdim + j) = res->space.sigma->s.at(i, j);
        if (res->space.form && !res->space.form->t.at(i, j).is_zero())
          t.at(cdim + i, cdim + j) = res->space.form->t.at(i, j);
      }
  }

  StructuredSpace space;
  space.dim = n;
  space.family = core.family;
  if (family_has_form(core.family))
    space.form = Form{std::move(t), family_form_kind(core.family)};
  if (ssign) space.sigma = AntiLinearMap{std::move(s), *ssign};

  Vec<G> v0(n, G(0));
  if (ssign && *ssign == -1) {
    v0[idx(0, core.h)] = G(1);
    v0[idx(1, core.h)] = G(0) - G::i();
  } else if (core.family == Family::GlSigmaPlus) {
    v0[idx(0, core.h)] = G(*core.modulus);
  } else {
    v0[idx(0, core.h)] = G(1);
  }
  return make_triple(make_full_pair(std::move(space), std::move(y)),
                     std::move(v0));
}

}  // namespace orbitforge
