#include <orbitforge/decompose.hpp>

#include <optional>
#include <string>
#include <utility>

#include <orbitforge/errors.hpp>

namespace orbitforge {

namespace {

using GMat = Mat<GaussianRational>;
using GVec = Vec<GaussianRational>;

GaussianRational half() { return GaussianRational(2).inverse(); }

// Current view of the still-unsplit part, nested inside the carrier.
struct View {
  GMat z;  // carrier coordinates of the active subspace, one column per axis
  StructuredSpace sp;
  GMat a;
};

struct RawBlock {
  TypeLabel label;
  std::vector<std::vector<GVec>> chains;  // carrier coordinates
};

GaussianRational val(const View& v, const GVec& u, const GVec& w) {
  return evaluate_form(*v.sp.form, u, w);
}

int real_sign(const GaussianRational& x, const char* what) {
  if (!x.im().is_zero() || x.re().is_zero()) {
    fail(ErrorName::ConditionViolated, std::string(what) + " must be real nonzero");
  }
  return x.re().sign();
}

struct Pick {
  std::vector<GVec> tops;  // exact vectors in view coordinates
  std::optional<int> eps;
  TypeKind kind = TypeKind::Single;
};

// Anisotropic vector for the hermitian family: diagonal scan, then
// polarization over x in {1, i}.
Pick pick_hermitian(const View& v, const GMat& lift, const GMat& ah, std::size_t h) {
  std::size_t k = lift.cols();
  auto moment = [&](const GVec& t) { return val(v, t, ah * t); };
  std::optional<GVec> top;
  for (std::size_t i = 0; i < k && !top; ++i) {
    GVec t = lift.col(i);
    if (!moment(t).is_zero()) top = std::move(t);
  }
  for (std::size_t i = 0; i < k && !top; ++i) {
    for (std::size_t j = i + 1; j < k && !top; ++j) {
      for (const GaussianRational& x :
           {GaussianRational(1), GaussianRational::i()}) {
        GVec t = vec_add(lift.col(i), vec_scale(x, lift.col(j)));
        if (!moment(t).is_zero()) {
          top = std::move(t);
          break;
        }
      }
    }
  }
  if (!top) fail(ErrorName::ConditionViolated, "no anisotropic top vector");
  GaussianRational m = moment(*top);
  int eps = h % 2 == 0 ? real_sign(m, "hermitian top moment")
                       : real_sign(GaussianRational::i() * m, "odd top moment");
  return {{std::move(*top)}, eps, TypeKind::Single};
}

// sigma^2 = +1: select inside the real form of the top quotient.
Pick pick_real(const View& v, const GMat& lift, const GMat& kh, const GMat& ah,
               std::size_t h) {
  std::size_t k = lift.cols();
  GMat mapped = v.sp.sigma->s * lift.conjugate();
  auto coords = solve_matrix(hcat(lift, kh), mapped);
  if (!coords) fail(ErrorName::ConditionViolated, "top quotient sigma does not close");
  StructuredSpace qspace;
  qspace.dim = k;
  qspace.family = v.sp.family;
  qspace.sigma = AntiLinearMap{coords->submatrix(0, 0, k, k), 1};
  GMat real_basis = sector_bases(qspace).front().basis;
  if (real_basis.cols() != k) {
    fail(ErrorName::ConditionViolated, "top quotient real form has wrong size");
  }

  std::vector<GVec> cand(k);
  for (std::size_t i = 0; i < k; ++i) {
    GVec u = lift * real_basis.col(i);
    cand[i] = vec_scale(half(), vec_add(u, apply_sigma(*v.sp.sigma, u)));
  }
  auto moment = [&](const GVec& x, const GVec& y) { return val(v, x, ah * y); };

  if (reduced_form_kind(v.sp.form->kind, h) == FormKind::Symmetric) {
    for (std::size_t i = 0; i < k; ++i) {
      GaussianRational m = moment(cand[i], cand[i]);
      if (!m.is_zero()) {
        return {{cand[i]}, real_sign(m, "real top moment"), TypeKind::Single};
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        GVec t = vec_add(cand[i], cand[j]);
        GaussianRational m = moment(t, t);
        if (!m.is_zero()) {
          return {{std::move(t)}, real_sign(m, "real top moment"), TypeKind::Single};
        }
      }
    }
    fail(ErrorName::ConditionViolated, "no anisotropic real top vector");
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (!moment(cand[i], cand[j]).is_zero()) {
        return {{cand[i], cand[j]}, std::nullopt, TypeKind::Double};
      }
    }
  }
  fail(ErrorName::ConditionViolated, "no hyperbolic real top pair");
}

// sigma^2 = -1: select a nondegenerate line {t, sigma t}.  The candidate
// sweep covers the scalars 1, i, j, ij, which is enough to polarize both
// quaternionic symmetry classes.
Pick pick_quaternionic(const View& v, const GMat& lift, const GMat& ah,
                       std::size_t h) {
  std::size_t k = lift.cols();
  auto sig = [&](const GVec& u) { return apply_sigma(*v.sp.sigma, u); };
  bool alternating_reduced =
      reduced_form_kind(v.sp.form->kind, h) == FormKind::Alternating;

  std::vector<GVec> cand;
  for (std::size_t i = 0; i < k; ++i) cand.push_back(lift.col(i));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      GVec lj = lift.col(j);
      GVec slj = sig(lj);
      cand.push_back(vec_add(lift.col(i), lj));
      cand.push_back(vec_add(lift.col(i), vec_scale(GaussianRational::i(), lj)));
      cand.push_back(vec_add(lift.col(i), slj));
      cand.push_back(vec_add(lift.col(i), vec_scale(GaussianRational::i(), slj)));
    }
  }
  for (GVec& u : cand) {
    GVec su = sig(u);
    GaussianRational c = val(v, u, ah * su);
    if (alternating_reduced) {
      if (c.is_zero()) continue;
      int eps = -real_sign(c, "alternating line moment");
      return {{std::move(u), std::move(su)}, eps, TypeKind::Double};
    }
    GaussianRational a0 = val(v, u, ah * u);
    if (a0.is_zero() && c.is_zero()) continue;
    return {{std::move(u), std::move(su)}, std::nullopt, TypeKind::Double};
  }
  fail(ErrorName::ConditionViolated, "no nondegenerate quaternionic line");
}

std::vector<RawBlock> form_blocks(View v) {
  std::vector<RawBlock> out;
  while (v.sp.dim > 0) {
    std::size_t d = v.sp.dim;
    std::size_t h = nilpotency_height(v.a);
    GMat ah = mpow(v.a, h);
    GMat kh = kernel(ah);
    GMat lift = standard_complement(kh, d);

    Pick pick;
    if (!v.sp.sigma) {
      pick = pick_hermitian(v, lift, ah, h);
    } else if (v.sp.sigma->sign == 1) {
      pick = pick_real(v, lift, kh, ah, h);
    } else {
      pick = pick_quaternionic(v, lift, ah, h);
    }

    RawBlock blk;
    blk.label = TypeLabel{v.sp.family, h, pick.kind, pick.eps, 1};
    validate_type_label(blk.label);

    std::vector<GVec> block_vecs;
    for (const GVec& top : pick.tops) {
      std::vector<GVec> chain;
      GVec cur = top;
      for (std::size_t s = 0; s <= h; ++s) {
        chain.push_back(cur);
        block_vecs.push_back(cur);
        if (s < h) cur = v.a * cur;
      }
      std::vector<GVec> ambient;
      for (const GVec& x : chain) ambient.push_back(v.z * x);
      blk.chains.push_back(std::move(ambient));
    }
    std::size_t bd = block_vecs.size();

    GMat gram(bd, bd);
    for (std::size_t i = 0; i < bd; ++i)
      for (std::size_t j = 0; j < bd; ++j)
        gram.at(i, j) = val(v, block_vecs[i], block_vecs[j]);
    if (rank(gram) != bd) {
      fail(ErrorName::ConditionViolated, "degenerate block span");
    }

    bool hermitian = v.sp.form->kind == FormKind::Hermitian;
    const GMat& t = v.sp.form->t;
    GMat rows(2 * bd, d);
    for (std::size_t i = 0; i < bd; ++i) {
      GVec tb = t * block_vecs[i];
      if (hermitian) {
        GVec left = t.transpose() * block_vecs[i];
        for (std::size_t j = 0; j < d; ++j) {
          rows.at(2 * i, j) = left[j].conjugate();
          rows.at(2 * i + 1, j) = tb[j].conjugate();
        }
      } else {
        GVec left = t.transpose() * block_vecs[i];
        for (std::size_t j = 0; j < d; ++j) {
          rows.at(2 * i, j) = tb[j];
          rows.at(2 * i + 1, j) = left[j];
        }
      }
    }
    GMat rest = kernel(rows);
    if (rest.cols() != d - bd) {
      fail(ErrorName::ConditionViolated, "block does not split off");
    }
    out.push_back(std::move(blk));

    if (rest.cols() == 0) break;
    Subspace sub = make_subspace(rest);
    v.sp = restrict_space(v.sp, sub);
    v.a = restrict_to(v.a, sub);
    v.z = v.z * rest;
  }
  return out;
}

// Families with no form: sigma-compatible Jordan chains, longest first.
std::vector<RawBlock> free_blocks(const View& v) {
  std::vector<RawBlock> out;
  std::size_t d = v.sp.dim;
  if (d == 0) return out;
  std::size_t h = nilpotency_height(v.a);
  bool quaternionic = v.sp.sigma->sign == -1;
  auto sig = [&](const GVec& u) { return apply_sigma(*v.sp.sigma, u); };

  std::vector<GMat> filt;
  for (std::size_t t = 0; t <= h + 1; ++t) filt.push_back(kernel(mpow(v.a, t)));

  struct ChainRec {
    GVec top;
    std::size_t len;
  };
  std::vector<ChainRec> chains;

  for (std::size_t level = h + 1; level >= 1; --level) {
    GMat blocked = filt[level - 1];
    for (const ChainRec& c : chains) {
      if (c.len >= level) {
        blocked = hcat(blocked, col_matrix(mpow(v.a, c.len - level) * c.top));
      }
    }
    std::size_t have = rank(blocked);
    std::size_t want = filt[level].cols();

    std::vector<GVec> cand;
    for (std::size_t i = 0; i < filt[level].cols(); ++i) {
      GVec x = filt[level].col(i);
      if (quaternionic) {
        cand.push_back(std::move(x));
      } else {
        cand.push_back(vec_scale(half(), vec_add(x, sig(x))));
        GVec ix = vec_scale(GaussianRational::i(), x);
        cand.push_back(vec_scale(half(), vec_add(ix, sig(ix))));
      }
    }
    while (have < want) {
      bool found = false;
      for (const GVec& t : cand) {
        if (quaternionic) {
          GVec st = sig(t);
          GMat widened = hcat(blocked, hcat(col_matrix(t), col_matrix(st)));
          std::size_t r = rank(widened);
          if (r == have) continue;
          if (r != have + 2) {
            fail(ErrorName::ConditionViolated, "quaternionic tops do not pair");
          }
          chains.push_back({t, level});
          chains.push_back({st, level});
          blocked = std::move(widened);
          have = r;
        } else {
          GMat widened = hcat(blocked, col_matrix(t));
          if (rank(widened) == have) continue;
          chains.push_back({t, level});
          blocked = std::move(widened);
          ++have;
        }
        found = true;
        break;
      }
      if (!found) fail(ErrorName::ConditionViolated, "chain tops incomplete");
    }
  }

  std::size_t step = quaternionic ? 2 : 1;
  for (std::size_t i = 0; i < chains.size(); i += step) {
    RawBlock blk;
    blk.label = TypeLabel{v.sp.family, chains[i].len - 1,
                          quaternionic ? TypeKind::Double : TypeKind::Single,
                          std::nullopt, 1};
    validate_type_label(blk.label);
    for (std::size_t c = i; c < i + step; ++c) {
      std::vector<GVec> chain;
      GVec cur = chains[c].top;
      for (std::size_t s = 0; s < chains[c].len; ++s) {
        chain.push_back(v.z * cur);
        if (s + 1 < chains[c].len) cur = v.a * cur;
      }
      blk.chains.push_back(std::move(chain));
    }
    out.push_back(std::move(blk));
  }
  return out;
}

}  // namespace

Decomposition decompose_nilpotent_pair(const Pair& p) {
  Decomposition out;
  std::size_t w = p.carrier.dim();
  if (w == 0) return out;
  nilpotency_height(p.a);

  View v{Mat<GaussianRational>::identity(w), p.on_carrier, p.a};
  std::vector<RawBlock> raw =
      p.on_carrier.form ? form_blocks(std::move(v)) : free_blocks(v);

  std::size_t total = 0;
  std::vector<TypeLabel> labels;
  for (RawBlock& blk : raw) {
    TypeBlock tb;
    tb.label = blk.label;
    for (std::vector<GVec>& chain : blk.chains) {
      Chain c;
      for (GVec& x : chain) c.vectors.push_back(p.carrier.basis * x);
      total += c.vectors.size();
      tb.chains.push_back(std::move(c));
    }
    labels.push_back(blk.label);
    out.blocks.push_back(std::move(tb));
  }
  if (total != w) {
    fail(ErrorName::ConditionViolated, "block dimensions do not add up");
  }
  out.labels = aggregate_labels(std::move(labels));
  return out;
}

namespace {

// Top anti-diagonal moments per chain pair; empty for families with no form.
Mat<GaussianRational> top_moment(const TypeLabel& l) {
  GaussianRational e(l.eps.value_or(1));
  GaussianRational i = GaussianRational::i();
  bool even = l.h % 2 == 0;
  switch (l.family) {
    case Family::GlSigmaPlus:
    case Family::GlSigmaMinus:
      return {};
    case Family::GlTauStar:
      return even ? GMat{{e}} : GMat{{GaussianRational(0) - i * e}};
    case Family::OSigmaPlus:
      return even ? GMat{{e}}
                  : GMat{{GaussianRational(0), GaussianRational(1)},
                         {GaussianRational(-1), GaussianRational(0)}};
    case Family::SpSigmaPlus:
      return !even ? GMat{{e}}
                   : GMat{{GaussianRational(0), GaussianRational(1)},
                          {GaussianRational(-1), GaussianRational(0)}};
    case Family::OSigmaMinus:
      return even ? GMat::identity(2)
                  : GMat{{GaussianRational(0), GaussianRational(0) - e},
                         {e, GaussianRational(0)}};
    case Family::SpSigmaMinus:
      return even ? GMat{{GaussianRational(0), GaussianRational(0) - e},
                         {e, GaussianRational(0)}}
                  : GMat::identity(2);
  }
  return {};
}

}  // namespace

Pair synthesize_type(const TypeLabel& label) {
  return synthesize_types(label.family, {label});
}

Pair synthesize_types(Family family, const std::vector<TypeLabel>& labels) {
  for (const TypeLabel& l : labels) {
    if (l.family != family) {
      fail(ErrorName::FamilyMismatch, "label family differs from target family");
    }
    validate_type_label(l);
  }
  std::vector<TypeLabel> flat = expand_labels(labels);
  std::size_t n = 0;
  for (const TypeLabel& l : flat) n += l.block_dim();

  GMat y(n, n);
  std::optional<int> ssign = family_sigma_sign(family);
  GMat s(n, n);
  bool has_form = family_has_form(family);
  GMat t(n, n);

  std::size_t off = 0;
  for (const TypeLabel& l : flat) {
    std::size_t m = l.h + 1;
    std::size_t ch = l.chain_count();
    auto idx = [&](std::size_t c, std::size_t a) { return off + c * m + a; };
    for (std::size_t c = 0; c < ch; ++c) {
      for (std::size_t a = 0; a + 1 < m; ++a) {
        y.at(idx(c, a + 1), idx(c, a)) = GaussianRational(1);
      }
    }
    if (ssign) {
      if (*ssign == 1) {
        for (std::size_t c = 0; c < ch; ++c)
          for (std::size_t a = 0; a < m; ++a)
            s.at(idx(c, a), idx(c, a)) = GaussianRational(1);
      } else {
        for (std::size_t a = 0; a < m; ++a) {
          s.at(idx(1, a), idx(0, a)) = GaussianRational(1);
          s.at(idx(0, a), idx(1, a)) = GaussianRational(-1);
        }
      }
    }
    if (has_form) {
      GMat mu = top_moment(l);
      bool hermitian = family == Family::GlTauStar;
      for (std::size_t x = 0; x < ch; ++x) {
        for (std::size_t yy = 0; yy < ch; ++yy) {
          if (mu.at(x, yy).is_zero()) continue;
          for (std::size_t a = 0; a <= l.h; ++a) {
            std::size_t b = l.h - a;
            GaussianRational value =
                (a % 2 == 0 ? mu.at(x, yy) : GaussianRational(0) - mu.at(x, yy));
            if (hermitian) {
              t.at(idx(x, a), idx(yy, b)) = value;
            } else {
              t.at(idx(yy, b), idx(x, a)) = value;
            }
          }
        }
      }
    }
    off += l.block_dim();
  }

  StructuredSpace space;
  space.dim = n;
  space.family = family;
  if (has_form) space.form = Form{std::move(t), family_form_kind(family)};
  if (ssign) space.sigma = AntiLinearMap{std::move(s), *ssign};
  return make_full_pair(std::move(space), std::move(y));
}

}  // namespace orbitforge
