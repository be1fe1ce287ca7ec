#include <orbitforge/classify.hpp>

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <orbitforge/errors.hpp>
#include <orbitforge/quaternion.hpp>

namespace orbitforge {

namespace {

using GMat = Mat<GaussianRational>;
using GVec = Vec<GaussianRational>;
using G = GaussianRational;
using Q = Rational;

[[noreturn]] void no_row(const std::string& detail) {
  fail(ErrorName::NoTable2Row, detail);
}

GVec unit_vec(std::size_t n, std::size_t k) {
  GVec e(n, G(0));
  e[k] = G(1);
  return e;
}

bool same_mat(const GMat& x, const GMat& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      if (!(x.at(i, j) == y.at(i, j))) return false;
  return true;
}

Subspace image_subspace(const GMat& m) {
  Rref<G> red = rref(m);
  GMat basis(m.rows(), red.pivot_cols.size());
  for (std::size_t j = 0; j < red.pivot_cols.size(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i)
      basis.at(i, j) = m.at(i, red.pivot_cols[j]);
  return make_subspace(std::move(basis));
}

// Workspace over one nilpotent piece, with cached operator powers.
struct Ctx {
  StructuredSpace sp;
  GMat a;
  std::vector<GMat> pows;

  bool hermitian() const {
    return sp.form && sp.form->kind == FormKind::Hermitian;
  }
  G val(const GVec& u, const GVec& v) const {
    return evaluate_form(*sp.form, u, v);
  }
  G cv(const GVec& u, const GVec& v, std::size_t r) const {
    return val(u, pows[r] * v);
  }
  GVec sig(const GVec& u) const { return apply_sigma(*sp.sigma, u); }
};

Ctx make_ctx(StructuredSpace sp, GMat a) {
  Ctx c{std::move(sp), std::move(a), {}};
  std::size_t n = c.a.rows();
  c.pows.push_back(GMat::identity(n));
  while (c.pows.size() < n + 2 && !c.pows.back().is_zero())
    c.pows.push_back(c.pows.back() * c.a);
  while (c.pows.size() < n + 2) c.pows.emplace_back(n, n);
  return c;
}

std::vector<GVec> chain_family(const Ctx& c, const std::vector<GVec>& prim,
                               bool locked) {
  std::vector<GVec> full;
  for (const GVec& p : prim) {
    full.push_back(p);
    if (locked) full.push_back(c.sig(p));
  }
  return full;
}

// Clears every moment tau(Y^a t_x, Y^b t_y) with a + b < hb by shifting chain
// tops inside the span of their own images.  Shifts at level t >= 1 never move
// the top anti-diagonal or the image Y^hb of any top, so pinned marked vectors
// survive.  The dependence on the shift coefficients is exactly affine because
// all moments above hb vanish; coefficients are found by probing.
void straighten_chains(const Ctx& c, std::vector<GVec>& prim, std::size_t hb,
                       bool locked, bool real_only) {
  for (std::size_t t = 1; t <= hb; ++t) {
    std::size_t r = hb - t;
    std::vector<GVec> base = chain_family(c, prim, locked);
    std::size_t f = base.size();
    auto values = [&](const std::vector<GVec>& fl) {
      std::vector<G> out;
      out.reserve(f * f);
      for (std::size_t x = 0; x < f; ++x)
        for (std::size_t y = 0; y < f; ++y)
          out.push_back(c.cv(fl[x], fl[y], r));
      return out;
    };
    std::vector<G> cur = values(base);
    bool clean = true;
    for (const G& v : cur) clean = clean && v.is_zero();
    if (clean) continue;

    struct Unknown {
      std::size_t dst;
      std::size_t src;
      G phase;
    };
    std::vector<Unknown> unknowns;
    std::vector<G> phases{G(1)};
    if (!real_only) phases.push_back(G::i());
    for (std::size_t d = 0; d < prim.size(); ++d)
      for (std::size_t s = 0; s < f; ++s)
        for (const G& ph : phases) unknowns.push_back({d, s, ph});

    Mat<Q> sys(2 * f * f, unknowns.size());
    Vec<Q> rhs(2 * f * f, Q(0));
    for (std::size_t e = 0; e < cur.size(); ++e) {
      rhs[2 * e] = -cur[e].re();
      rhs[2 * e + 1] = -cur[e].im();
    }
    std::vector<GVec> shifts;
    shifts.reserve(unknowns.size());
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
      const Unknown& un = unknowns[u];
      GVec d = vec_scale(un.phase, c.pows[t] * base[un.src]);
      std::vector<GVec> trial = prim;
      trial[un.dst] = vec_add(trial[un.dst], d);
      std::vector<G> now = values(chain_family(c, trial, locked));
      for (std::size_t e = 0; e < now.size(); ++e) {
        G delta = now[e] - cur[e];
        sys.at(2 * e, u) = delta.re();
        sys.at(2 * e + 1, u) = delta.im();
      }
      shifts.push_back(std::move(d));
    }
    std::optional<Vec<Q>> sol = solve(sys, rhs);
    if (!sol) no_row("chain straightening has no rational solution");
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
      if ((*sol)[u].is_zero()) continue;
      prim[unknowns[u].dst] = vec_add(
          prim[unknowns[u].dst], vec_scale(G((*sol)[u]), shifts[u]));
    }
    for (const G& v : values(chain_family(c, prim, locked)))
      if (!v.is_zero())
        fail(ErrorName::ConditionViolated,
             "chain straightening left a nonzero low moment");
  }
}

// Left quaternion action on a chain top: (a + b j) . u = a u + b sigma(u).
GVec quat_act(const Ctx& c, const RationalQuaternion& p, const GVec& u) {
  GVec out = vec_scale(p.complex_part(), u);
  if (!p.j_part().is_zero())
    out = vec_add(out, vec_scale(p.j_part(), c.sig(u)));
  return out;
}

// Solves p q p^q = 1 when possible.  Writing p = a + b j,
// p^q p = (a^2 + conj(b)^2) + 2 Im(a b) k, and p q p^q = 1 iff p^q p = q^{-1};
// admissible values have the shape (complex) + (real) k.
std::optional<RationalQuaternion> congruence_to_one(
    const RationalQuaternion& q) {
  if (q.is_zero()) return std::nullopt;
  auto ok = [&](const RationalQuaternion& p) {
    return !p.is_zero() &&
           p * q * p.anti_involution() == RationalQuaternion(1);
  };
  if (ok(RationalQuaternion(1))) return RationalQuaternion(1);
  std::optional<Q> nroot = rational_sqrt(q.norm());
  if (!nroot) return std::nullopt;
  RationalQuaternion qi = q.inverse();
  G av = qi.complex_part();
  G gj = qi.j_part();
  if (!gj.re().is_zero()) return std::nullopt;
  Q s = gj.im();  // q^{-1} = av + s k

  std::vector<RationalQuaternion> cand;
  if (s.is_zero()) {
    if (av.is_real() && av.re().sign() > 0 && is_gaussian_norm(av.re())) {
      G g = gaussian_norm_witness(av.re());
      cand.emplace_back(G(g.re()), G(g.im()));
    }
    if (av.is_real() && av.re().sign() < 0 && is_gaussian_norm(-av.re())) {
      G g = gaussian_norm_witness(-av.re());
      cand.emplace_back(G(Q(0), g.re()), G(Q(0), g.im()));
    }
    if (std::optional<G> a = gaussian_sqrt(av)) {
      cand.emplace_back(*a, G(0));
      cand.emplace_back(G(0), a->conjugate());
    }
  } else {
    // b real: a = x + i s/(2b) with x = Im(av) b / s and u = b^2 solving
    // 2 u den = s^2 (Re(av) +- sqrt(N(q^{-1}))), den = Im(av)^2 + s^2.
    Q den = av.im() * av.im() + s * s;
    Q disc = Q(1) / *nroot;
    for (int sgn : {1, -1}) {
      Q u = s * s * (av.re() + (sgn > 0 ? disc : -disc)) / (den * Q(2));
      if (u.sign() <= 0) continue;
      std::optional<Q> root = rational_sqrt(u);
      if (!root) continue;
      for (int bs : {1, -1}) {
        Q b = bs > 0 ? *root : -*root;
        cand.emplace_back(G(av.im() * b / s, s / (b * Q(2))), G(b));
        // a real variant with the same squared-length candidates
        cand.emplace_back(G(b), G(-(av.im()) * b / s, s / (b * Q(2))));
      }
    }
  }
  for (const RationalQuaternion& p : cand)
    if (ok(p)) return p;
  for (int d = 1; d <= 3; ++d)
    for (int a1 = -2; a1 <= 2; ++a1)
      for (int a2 = -2; a2 <= 2; ++a2)
        for (int b1 = -2; b1 <= 2; ++b1)
          for (int b2 = -2; b2 <= 2; ++b2) {
            RationalQuaternion p(G(Q(a1) / Q(d), Q(a2) / Q(d)),
                                 G(Q(b1) / Q(d), Q(b2) / Q(d)));
            if (ok(p)) return p;
          }
  return std::nullopt;
}

// Isotropic partner with nonzero pairing against the marked vector, searched
// inside ker Y^{h+1} so the partner chain stops at the core height.
GVec find_partner(const Ctx& c, const GVec& v0, std::size_t h,
                  const std::optional<G>& gauge) {
  GMat kh = kernel(c.pows[h + 1]);
  std::optional<GVec> found;
  std::optional<G> sector;
  if (kh.cols() > 0) {
    StructuredSpace spk = restrict_space(c.sp, make_subspace(kh));
    for (const SectorBasis& sec : sector_bases(spk)) {
      for (std::size_t j = 0; j < sec.basis.cols() && !found; ++j) {
        GVec u = kh * sec.basis.col(j);
        if (!c.val(u, v0).is_zero()) {
          found = std::move(u);
          sector = sec.eigenvalue;
        }
      }
      if (found) break;
    }
  }
  if (!found)
    no_row("no isotropic partner chain pairs with the marked vector");
  GVec z = std::move(*found);
  if (c.sp.sigma && gauge && sector && !(*sector == *gauge))
    z = vec_scale(G::i(), z);
  G q = c.val(z, z);
  if (!q.is_zero()) {
    G beta = c.val(z, v0);
    z = vec_add(z, vec_scale(-q / (beta * G(2)), v0));
    if (!c.val(z, z).is_zero())
      fail(ErrorName::ConditionViolated, "isotropic shift failed to close");
  }
  return z;
}

// Clears tau(z, Y^h z) by shifting z along w; affine because the marked
// moment tau(w, Y^h w) vanishes on the double branch.
void clear_partner_moment(const Ctx& c, GVec& z, const GVec& w, std::size_t h,
                          bool real_only) {
  G cur = c.cv(z, z, h);
  if (cur.is_zero()) return;
  std::vector<G> phases{G(1)};
  if (!real_only) phases.push_back(G::i());
  Mat<Q> sys(2, phases.size());
  Vec<Q> rhs{-cur.re(), -cur.im()};
  for (std::size_t u = 0; u < phases.size(); ++u) {
    GVec trial = vec_add(z, vec_scale(phases[u], w));
    G delta = c.cv(trial, trial, h) - cur;
    sys.at(0, u) = delta.re();
    sys.at(1, u) = delta.im();
  }
  std::optional<Vec<Q>> sol = solve(sys, rhs);
  if (!sol) no_row("the partner chain moment cannot be cleared");
  for (std::size_t u = 0; u < phases.size(); ++u)
    if (!(*sol)[u].is_zero())
      z = vec_add(z, vec_scale(G((*sol)[u]) * phases[u], w));
  if (!c.cv(z, z, h).is_zero())
    fail(ErrorName::ConditionViolated, "partner moment did not clear");
}

// ---- residual summands ----

struct ResBlock {
  TypeLabel label;
  std::vector<GVec> tops;  // nilpotent-part coordinates; sigma partner second
};

std::vector<ResBlock> form_residual(const Ctx& c, const GMat& comp) {
  std::vector<ResBlock> out;
  if (comp.cols() == 0) return out;
  Pair pr = make_pair(c.sp, c.a, make_subspace(comp));
  Decomposition dec = decompose_nilpotent_pair(pr);
  for (const TypeBlock& b : dec.blocks) {
    ResBlock rb;
    rb.label = b.label;
    for (const Chain& ch : b.chains) rb.tops.push_back(ch.vectors.front());
    if (c.sp.sigma && c.sp.sigma->sign == -1 && rb.tops.size() == 2)
      rb.tops[1] = c.sig(rb.tops[0]);
    out.push_back(std::move(rb));
  }
  return out;
}

// Chain basis of the form-free families around the already-chosen marked
// chains: level peeling with sigma-symmetrized candidates (gl sigma_+) or
// sigma-paired tops (gl sigma_-).
std::vector<ResBlock> free_residual(const Ctx& c,
                                    const std::vector<GVec>& seed_tops,
                                    std::size_t seed_len) {
  std::size_t d = c.a.rows();
  bool quaternionic = c.sp.sigma->sign == -1;
  std::size_t height = 0;
  while (!c.pows[height].is_zero()) ++height;

  std::vector<GMat> filt;
  for (std::size_t t = 0; t <= height; ++t) filt.push_back(kernel(c.pows[t]));

  struct Rec {
    GVec top;
    std::size_t len;
    bool seed;
  };
  std::vector<Rec> chains;
  for (const GVec& s : seed_tops) chains.push_back({s, seed_len, true});

  G half = G(2).inverse();
  for (std::size_t level = height; level >= 1; --level) {
    GMat blocked = filt[level - 1];
    for (const Rec& r : chains)
      if (r.len >= level)
        blocked = hcat(blocked, col_matrix(c.pows[r.len - level] * r.top));
    std::size_t have = rank(blocked);
    std::size_t want = filt[level].cols();

    std::vector<GVec> cand;
    for (std::size_t i = 0; i < filt[level].cols(); ++i) {
      GVec x = filt[level].col(i);
      if (quaternionic) {
        cand.push_back(std::move(x));
      } else {
        cand.push_back(vec_scale(half, vec_add(x, c.sig(x))));
        GVec ix = vec_scale(G::i(), x);
        cand.push_back(vec_scale(half, vec_add(ix, c.sig(ix))));
      }
    }
    while (have < want) {
      bool found = false;
      for (const GVec& t : cand) {
        if (quaternionic) {
          GVec st = c.sig(t);
          GMat widened = hcat(blocked, hcat(col_matrix(t), col_matrix(st)));
          std::size_t r = rank(widened);
          if (r == have) continue;
          if (r != have + 2)
            fail(ErrorName::ConditionViolated,
                 "quaternionic chain tops do not pair");
          chains.push_back({t, level, false});
          chains.push_back({st, level, false});
          blocked = std::move(widened);
          have = r;
        } else {
          GMat widened = hcat(blocked, col_matrix(t));
          if (rank(widened) == have) continue;
          chains.push_back({t, level, false});
          blocked = std::move(widened);
          ++have;
        }
        found = true;
        break;
      }
      if (!found)
        fail(ErrorName::ConditionViolated, "chain extension incomplete");
    }
  }

  std::size_t total = 0;
  for (const Rec& r : chains) total += r.len;
  if (total != d)
    fail(ErrorName::ConditionViolated, "chain extension lost dimensions");

  std::vector<ResBlock> out;
  std::size_t step = quaternionic ? 2 : 1;
  for (std::size_t i = 0; i < chains.size(); i += step) {
    if (chains[i].seed) continue;
    ResBlock rb;
    rb.label = TypeLabel{c.sp.family, chains[i].len - 1,
                         quaternionic ? TypeKind::Double : TypeKind::Single,
                         std::nullopt, 1};
    validate_type_label(rb.label);
    for (std::size_t k = i; k < i + step; ++k) rb.tops.push_back(chains[k].top);
    out.push_back(std::move(rb));
  }
  return out;
}

// ---- residual normalization onto the canonical per-type values ----

struct ScaleOption {
  Q n;  // contribution of the scalar to a moment: c^2 resp. |c|^2
  G c;
};

std::vector<ScaleOption> scale_grid(bool hermitian) {
  std::map<Q, G> seen;
  seen.emplace(Q(0), G(0));
  for (int p = 1; p <= 8; ++p)
    for (int q = 1; q <= 6; ++q) {
      Q c = Q(p) / Q(q);
      seen.emplace(c * c, G(c));
    }
  if (hermitian)
    for (int p = 0; p <= 5; ++p)
      for (int q = 0; q <= 5; ++q)
        for (int d = 1; d <= 4; ++d) {
          if (p == 0 && q == 0) continue;
          G c(Q(p) / Q(d), Q(q) / Q(d));
          seen.emplace(c.norm(), c);
        }
  std::vector<ScaleOption> out;
  out.reserve(seen.size());
  for (auto& [n, c] : seen) out.push_back({n, c});
  return out;
}

std::optional<G> admissible_scale(const Q& n, bool hermitian) {
  if (n.sign() < 0) return std::nullopt;
  if (n.is_zero()) return G(0);
  if (hermitian) {
    if (!is_gaussian_norm(n)) return std::nullopt;
    return gaussian_norm_witness(n);
  }
  std::optional<Q> r = rational_sqrt(n);
  if (!r) return std::nullopt;
  return G(*r);
}

// Coefficients x with sum n(x_i) rho_i = 1 over the admissible scalars.
std::optional<std::vector<G>> represent_one(const std::vector<Q>& rho,
                                            bool hermitian) {
  std::size_t k = rho.size();
  std::vector<G> x(k, G(0));
  for (std::size_t i = 0; i < k; ++i) {
    if (std::optional<G> c = admissible_scale(Q(1) / rho[i], hermitian)) {
      x[i] = *c;
      return x;
    }
  }
  static const std::vector<ScaleOption> grid_r = scale_grid(false);
  static const std::vector<ScaleOption> grid_h = scale_grid(true);
  const std::vector<ScaleOption>& grid = hermitian ? grid_h : grid_r;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      for (const ScaleOption& opt : grid) {
        Q rem = (Q(1) - opt.n * rho[i]) / rho[j];
        if (std::optional<G> c = admissible_scale(rem, hermitian)) {
          std::fill(x.begin(), x.end(), G(0));
          x[i] = opt.c;
          x[j] = *c;
          return x;
        }
      }
    }
  std::size_t cap = std::min<std::size_t>(grid.size(), 60);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t l = 0; l < k; ++l) {
        if (i == j || j == l || i == l) continue;
        for (std::size_t gi = 0; gi < cap; ++gi)
          for (std::size_t gj = 0; gj < cap; ++gj) {
            Q rem =
                (Q(1) - grid[gi].n * rho[i] - grid[gj].n * rho[j]) / rho[l];
            if (std::optional<G> c = admissible_scale(rem, hermitian)) {
              std::fill(x.begin(), x.end(), G(0));
              x[i] = grid[gi].c;
              x[j] = grid[gj].c;
              x[l] = *c;
              return x;
            }
          }
      }
  return std::nullopt;
}

// Rebuild the tops of one single-chain stratum so each moment equals the
// canonical target, preserving pairwise top orthogonality.
std::optional<std::vector<GVec>> renorm_single_stratum(const Ctx& c,
                                                       std::vector<GVec> tops,
                                                       std::size_t hb,
                                                       const G& target) {
  std::vector<GVec> out;
  bool herm = c.hermitian();
  while (!tops.empty()) {
    std::vector<Q> rho;
    for (const GVec& t : tops) {
      G r = c.cv(t, t, hb) / target;
      if (!r.is_real() || r.re().sign() <= 0) return std::nullopt;
      rho.push_back(r.re());
    }
    std::optional<std::vector<G>> x = represent_one(rho, herm);
    if (!x) return std::nullopt;
    GVec u(c.a.rows(), G(0));
    std::size_t pivot = tops.size();
    for (std::size_t i = 0; i < tops.size(); ++i) {
      if ((*x)[i].is_zero()) continue;
      if (pivot == tops.size()) pivot = i;
      u = vec_add(u, vec_scale((*x)[i], tops[i]));
    }
    if (!(c.cv(u, u, hb) == target))
      fail(ErrorName::ConditionViolated, "stratum renormalization drifted");
    std::vector<GVec> rest;
    for (std::size_t i = 0; i < tops.size(); ++i) {
      if (i == pivot) continue;
      G cross = c.cv(u, tops[i], hb);
      rest.push_back(vec_sub(tops[i], vec_scale(cross / target, u)));
    }
    out.push_back(std::move(u));
    tops = std::move(rest);
  }
  return out;
}

// Per-stratum normalization of the residual blocks onto the values of the
// canonical models, followed by a joint straightening of each stratum.
void normalize_residuals(const Ctx& c, std::vector<ResBlock>& blocks) {
  if (blocks.empty() || !c.sp.form) return;
  std::vector<std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    bool placed = false;
    for (std::vector<std::size_t>& s : strata)
      if (blocks[s.front()].label == blocks[i].label) {
        s.push_back(i);
        placed = true;
        break;
      }
    if (!placed) strata.push_back({i});
  }

  bool qplus = c.sp.sigma && c.sp.sigma->sign == 1;
  bool qminus = c.sp.sigma && c.sp.sigma->sign == -1;

  for (const std::vector<std::size_t>& s : strata) {
    const TypeLabel& label = blocks[s.front()].label;
    std::size_t hb = label.h;
    Pair proto = synthesize_type(label);
    Ctx pc = make_ctx(proto.space, proto.y);
    std::size_t m = hb + 1;

    if (label.kind == TypeKind::Single) {
      G target = pc.cv(unit_vec(m, 0), unit_vec(m, 0), hb);
      std::vector<GVec> tops;
      for (std::size_t i : s) tops.push_back(blocks[i].tops.front());
      std::optional<std::vector<GVec>> fresh =
          renorm_single_stratum(c, std::move(tops), hb, target);
      if (!fresh)
        no_row("no rational rescaling matches the canonical chain moment");
      straighten_chains(c, *fresh, hb, false, qplus);
      for (std::size_t i = 0; i < s.size(); ++i)
        blocks[s[i]].tops = {(*fresh)[i]};
      continue;
    }

    if (qminus) {
      GVec e0 = unit_vec(2 * m, 0);
      G alpha_m = pc.cv(e0, pc.sig(e0), hb);
      bool ham_alt = label.eps.has_value();
      std::vector<GVec> prim;
      for (std::size_t i : s) {
        GVec& t0 = blocks[i].tops[0];
        if (ham_alt) {
          G cur = c.cv(t0, c.sig(t0), hb);
          G ratio = alpha_m / cur;
          if (!ratio.is_real() || ratio.re().sign() <= 0)
            no_row("the alternating pair moment has the wrong sign class");
          t0 = quat_act(c, quaternion_norm_witness(ratio.re()), t0);
        } else {
          G diag_m = pc.cv(e0, e0, hb);
          if (!diag_m.is_one() || !alpha_m.is_zero())
            fail(ErrorName::ConditionViolated, "unexpected canonical values");
          RationalQuaternion qv(c.cv(t0, t0, hb), c.cv(t0, c.sig(t0), hb));
          std::optional<RationalQuaternion> p = congruence_to_one(qv);
          if (!p)
            no_row("no rational quaternion congruence normalizes the pair");
          t0 = quat_act(c, *p, t0);
        }
        G want = ham_alt ? alpha_m : G(0);
        if (!(c.cv(t0, c.sig(t0), hb) == want) ||
            !(c.cv(t0, t0, hb) == pc.cv(e0, e0, hb)))
          fail(ErrorName::ConditionViolated, "pair normalization drifted");
        prim.push_back(t0);
      }
      straighten_chains(c, prim, hb, true, false);
      for (std::size_t i = 0; i < s.size(); ++i)
        blocks[s[i]].tops = {prim[i], c.sig(prim[i])};
      continue;
    }

    // sigma_+ hyperbolic pairs: rescale the partner onto the unit pairing.
    G chi = pc.cv(unit_vec(2 * m, 0), unit_vec(2 * m, m), hb);
    std::vector<GVec> prim;
    for (std::size_t i : s) {
      GVec& t0 = blocks[i].tops[0];
      GVec& t1 = blocks[i].tops[1];
      G cross = c.cv(t0, t1, hb);
      if (cross.is_zero())
        fail(ErrorName::ConditionViolated, "degenerate pair block");
      G factor = chi / cross;
      if (qplus && !factor.is_real())
        fail(ErrorName::ConditionViolated, "pair rescaling left the sector");
      t1 = vec_scale(factor, t1);
      if (!c.cv(t0, t0, hb).is_zero() || !c.cv(t1, t1, hb).is_zero())
        no_row("pair block carries a nonzero diagonal moment");
      prim.push_back(t0);
      prim.push_back(t1);
    }
    straighten_chains(c, prim, hb, false, qplus);
    for (std::size_t i = 0; i < s.size(); ++i)
      blocks[s[i]].tops = {prim[2 * i], prim[2 * i + 1]};
  }
}

// ---- final assembly ----

void verify_witness(const StructuredSpace& sp, const GMat& a, const GVec& v0,
                    const Triple& model, const GMat& p) {
  if (!inverse(p)) no_row("the assembled witness is singular");
  if (!same_mat(p * a, model.pair.y * p))
    no_row("the witness does not intertwine the operators");
  if (!(p * v0 == model.v0))
    no_row("the witness does not carry the marked vector");
  if (sp.sigma) {
    if (!same_mat(model.pair.space.sigma->s * p.conjugate(),
                  p * sp.sigma->s))
      no_row("the witness does not intertwine sigma");
  }
  if (sp.form) {
    const GMat& tm = model.pair.space.form->t;
    GMat pulled = sp.form->kind == FormKind::Hermitian
                      ? p.conjugate().transpose() * tm * p
                      : p.transpose() * tm * p;
    if (!same_mat(pulled, sp.form->t))
      no_row("the witness does not pull the form back");
  }
}

Triple extend_model(const Triple& nil, const StructuredSpace& sp,
                    const GMat& a, const Subspace& winv) {
  StructuredSpace rsp = restrict_space(sp, winv);
  GMat ainv = restrict_to(a, winv);
  std::size_t dn = nil.pair.space.dim;
  std::size_t n = dn + rsp.dim;

  GMat y(n, n);
  for (std::size_t i = 0; i < dn; ++i)
    for (std::size_t j = 0; j < dn; ++j) y.at(i, j) = nil.pair.y.at(i, j);
  for (std::size_t i = 0; i < rsp.dim; ++i)
    for (std::size_t j = 0; j < rsp.dim; ++j)
      y.at(dn + i, dn + j) = ainv.at(i, j);

  StructuredSpace space;
  space.dim = n;
  space.family = sp.family;
  if (sp.form) {
    GMat t(n, n);
    for (std::size_t i = 0; i < dn; ++i)
      for (std::size_t j = 0; j < dn; ++j)
        t.at(i, j) = nil.pair.space.form->t.at(i, j);
    for (std::size_t i = 0; i < rsp.dim; ++i)
      for (std::size_t j = 0; j < rsp.dim; ++j)
        t.at(dn + i, dn + j) = rsp.form->t.at(i, j);
    space.form = Form{std::move(t), sp.form->kind};
  }
  if (sp.sigma) {
    GMat s(n, n);
    for (std::size_t i = 0; i < dn; ++i)
      for (std::size_t j = 0; j < dn; ++j)
        s.at(i, j) = nil.pair.space.sigma->s.at(i, j);
    for (std::size_t i = 0; i < rsp.dim; ++i)
      for (std::size_t j = 0; j < rsp.dim; ++j)
        s.at(dn + i, dn + j) = rsp.sigma->s.at(i, j);
    space.sigma = AntiLinearMap{std::move(s), sp.sigma->sign};
  }

  GVec v0(n, G(0));
  for (std::size_t i = 0; i < dn; ++i) v0[i] = nil.v0[i];
  return make_triple(make_full_pair(std::move(space), std::move(y)),
                     std::move(v0));
}

}  // namespace

ClassificationResult classify(const Triple& t) {
  const Pair& p = t.pair;
  const StructuredSpace& sp = p.on_carrier;
  const Family fam = sp.family;
  const std::size_t n = p.carrier.dim();
  const bool has_form = family_has_form(fam);
  const std::optional<int> ssign = family_sigma_sign(fam);

  std::optional<GVec> v0c = solve(p.carrier.basis, t.v0);
  if (!v0c)
    fail(ErrorName::ConditionViolated, "marked vector left the carrier");

  // Fitting split: the nilpotent part carries the classification, the
  // invertible part is reported exactly.
  Subspace w0 = generalized_zero_eigenspace(p.a);
  Subspace winv = image_subspace(mpow(p.a, n));
  if (w0.dim() + winv.dim() != n)
    fail(ErrorName::ConditionViolated, "degenerate operator split");
  std::optional<UnclassifiedResidual> unres;
  if (winv.dim() > 0) {
    if (has_form) {
      for (std::size_t i = 0; i < w0.basis.cols(); ++i)
        for (std::size_t j = 0; j < winv.basis.cols(); ++j)
          if (!evaluate_form(*sp.form, w0.basis.col(i), winv.basis.col(j))
                   .is_zero())
            fail(ErrorName::ConditionViolated,
                 "operator split is not orthogonal");
    }
    GMat ainv = restrict_to(p.a, winv);
    UnclassifiedResidual ur;
    ur.dim = winv.dim();
    ur.carrier = winv;
    ur.jordan = jordan_structure(ainv);
    ur.char_poly = char_poly(ainv);
    unres = std::move(ur);
  }

  Pair p0 = make_pair(sp, p.a, w0);
  Triple t0 = make_triple(p0, *v0c);
  HeightSearch hs = distinguished_height_search(t0);
  const std::size_t h = hs.h;

  Ctx ctx = make_ctx(p0.on_carrier, p0.a);
  std::optional<GVec> wsol = solve(w0.basis, hs.witness);
  std::optional<GVec> vsol = solve(w0.basis, *v0c);
  if (!wsol || !vsol)
    fail(ErrorName::ConditionViolated, "height witness left the split part");
  GVec w = std::move(*wsol);
  GVec v00 = std::move(*vsol);
  const G mu0 = hs.mu0;

  // Row selection.
  DistinguishedLabel core;
  core.family = fam;
  core.h = h;
  std::vector<GVec> prim{w};
  bool locked = false;
  bool qplus = ssign && *ssign == 1;

  if (fam == Family::GlSigmaPlus) {
    core.kind = TypeKind::Single;
    core.modulus = Q(1);
    core.reduced_dim = 1;
  } else if (fam == Family::GlSigmaMinus) {
    core.kind = TypeKind::Double;
    core.reduced_dim = 2;
    locked = true;
  } else if (!mu0.is_zero()) {
    if (ssign && *ssign == -1)
      no_row("sigma_minus marked chains cannot close sigma-invariantly");
    core.kind = TypeKind::Single;
    core.reduced_dim = 1;
    G mv = (fam == Family::GlTauStar && h % 2 == 1) ? G::i() * mu0 : mu0;
    if (!mv.is_real() || mv.re().is_zero())
      no_row("the marked moment lies outside the row's value line");
    core.eps = mv.re().sign();
    core.modulus = mv.re().abs();
  } else {
    core.kind = TypeKind::Double;
    core.reduced_dim = 2;
    if (fam == Family::GlTauStar && h % 2 == 1)
      no_row("hermitian odd height with vanishing moment decomposes further");
    if (ssign && *ssign == -1) {
      locked = true;
      if (reduced_form_kind(sp.form->kind, h) == FormKind::Alternating) {
        G cross = ctx.cv(w, ctx.sig(w), h);
        if (!cross.is_real() || cross.re().is_zero())
          no_row("the alternating pair moment is not real");
        int g = t.condition_eigenvalue == G::i() ? 1 : -1;
        core.eps = -cross.re().sign() * g;
      }
    } else {
      GVec z = find_partner(ctx, v00, h, t.condition_eigenvalue);
      clear_partner_moment(ctx, z, w, h, qplus);
      prim.push_back(std::move(z));
    }
  }
  try {
    validate_distinguished_label(core);
  } catch (const Error& e) {
    if (e.name() == ErrorName::InvalidLabel)
      no_row(std::string("no distinguished row matches: ") + e.what());
    throw;
  }

  // Straighten the marked chains; the image Y^h w = v0 is untouched.
  if (has_form) straighten_chains(ctx, prim, h, locked, qplus);
  if (!(ctx.pows[h] * prim.front() == v00))
    fail(ErrorName::ConditionViolated, "straightening moved the marked vector");

  std::vector<GVec> core_chains = chain_family(ctx, prim, locked);
  const std::size_t kc = core_chains.size();
  std::vector<GVec> core_vecs;
  for (const GVec& top : core_chains) {
    if ((ctx.pows[h] * top) == GVec(w0.dim(), G(0)) ||
        !(ctx.pows[h + 1] * top == GVec(w0.dim(), G(0))))
      no_row("the accepted chains are not uniform of the marked height");
    for (std::size_t aidx = 0; aidx <= h; ++aidx)
      core_vecs.push_back(ctx.pows[aidx] * top);
  }
  Subspace core_span;
  try {
    core_span = make_subspace(columns_matrix(core_vecs, w0.dim()));
  } catch (const Error&) {
    no_row("the marked chains are dependent");
  }
  if (kernel(restrict_to(ctx.a, core_span)).cols() != kc)
    no_row("the accepted chain span has the wrong kernel dimension");
  if (has_form) {
    GMat gram(core_vecs.size(), core_vecs.size());
    for (std::size_t i = 0; i < core_vecs.size(); ++i)
      for (std::size_t j = 0; j < core_vecs.size(); ++j)
        gram.at(i, j) = ctx.val(core_vecs[i], core_vecs[j]);
    if (det(gram).is_zero())
      no_row("the accepted chain span has a degenerate induced pairing");
  }

  // Residual summands.
  std::vector<ResBlock> blocks;
  if (has_form) {
    GMat rows(core_vecs.size(), w0.dim());
    bool herm = ctx.hermitian();
    for (std::size_t i = 0; i < core_vecs.size(); ++i) {
      GVec rowv = herm ? (ctx.sp.form->t * core_vecs[i])
                       : (ctx.sp.form->t.transpose() * core_vecs[i]);
      for (std::size_t j = 0; j < w0.dim(); ++j)
        rows.at(i, j) = herm ? rowv[j].conjugate() : rowv[j];
    }
    GMat comp = kernel(rows);
    if (comp.cols() != w0.dim() - core_vecs.size())
      no_row("the marked chain span does not split off");
    blocks = form_residual(ctx, comp);
  } else {
    blocks = free_residual(ctx, core_chains, h + 1);
  }

  std::vector<TypeLabel> flat;
  for (const ResBlock& b : blocks) flat.push_back(b.label);
  std::vector<TypeLabel> agg = aggregate_labels(flat);

  // Canonical model: input gauge where sigma pins it, +i for gl sigma_-.
  Triple msynth =
      fam == Family::GlTauStar
          ? synthesize_distinguished(core, agg)
          : synthesize_distinguished(
                core, agg,
                fam == Family::GlSigmaMinus ? G::i() : *t.condition_eigenvalue);
  Ctx mctx = make_ctx(msynth.pair.space, msynth.pair.y);
  const std::size_t dm = msynth.pair.space.dim;
  const std::size_t mlen = h + 1;

  // Canonical marked chain tops inside the model.
  GVec wm = unit_vec(dm, 0);
  if (ssign && *ssign == -1)
    wm = vec_sub(wm, vec_scale(G::i(), unit_vec(dm, mlen)));
  std::optional<GVec> zm;
  if (core.kind == TypeKind::Double)
    zm = (ssign && *ssign == -1) ? mctx.sig(wm) : unit_vec(dm, mlen);

  if (has_form) {
    if (core.kind == TypeKind::Single) {
      if (!(ctx.cv(w, w, h) == mctx.cv(wm, wm, h)))
        fail(ErrorName::ConditionViolated, "marked moment drifted");
    } else if (locked) {
      if (!(ctx.cv(prim[0], ctx.sig(prim[0]), h) == mctx.cv(wm, *zm, h)) ||
          !(ctx.cv(prim[0], prim[0], h) == mctx.cv(wm, wm, h)))
        no_row(
            "the marked pair moment is pinned by the marked vector; no exact "
            "rational witness onto the canonical model");
    } else {
      G cross = ctx.cv(prim[0], prim[1], h);
      G chi = mctx.cv(wm, *zm, h);
      G factor = chi / cross;
      if (qplus && !factor.is_real())
        fail(ErrorName::ConditionViolated, "partner rescaling left the sector");
      prim[1] = vec_scale(factor, prim[1]);
    }
  }

  normalize_residuals(ctx, blocks);

  // Slot layout of the model and the matched block order.
  std::vector<TypeLabel> slots = expand_labels(agg);
  std::vector<bool> used(blocks.size(), false);
  std::vector<std::size_t> order;
  for (const TypeLabel& slot : slots) {
    bool hit = false;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (used[i] || !(blocks[i].label == slot)) continue;
      used[i] = true;
      order.push_back(i);
      hit = true;
      break;
    }
    if (!hit)
      fail(ErrorName::ConditionViolated, "residual labels do not match");
  }

  std::vector<GVec> in_list;
  std::vector<GVec> m_list;
  {
    std::vector<GVec> ctops = chain_family(ctx, prim, locked);
    std::vector<GVec> mtops{wm};
    if (zm) mtops.push_back(*zm);
    for (std::size_t cidx = 0; cidx < ctops.size(); ++cidx)
      for (std::size_t aidx = 0; aidx <= h; ++aidx) {
        in_list.push_back(ctx.pows[aidx] * ctops[cidx]);
        m_list.push_back(mctx.pows[aidx] * mtops[cidx]);
      }
    std::size_t off = core.block_dim();
    for (std::size_t sidx = 0; sidx < slots.size(); ++sidx) {
      const ResBlock& b = blocks[order[sidx]];
      std::size_t bm = slots[sidx].h + 1;
      for (std::size_t cidx = 0; cidx < b.tops.size(); ++cidx)
        for (std::size_t aidx = 0; aidx < bm; ++aidx) {
          in_list.push_back(ctx.pows[aidx] * b.tops[cidx]);
          m_list.push_back(unit_vec(dm, off + cidx * bm + aidx));
        }
      off += slots[sidx].block_dim();
    }
  }
  std::optional<GMat> bin_inv =
      inverse(columns_matrix(in_list, w0.dim()));
  if (!bin_inv)
    fail(ErrorName::ConditionViolated, "assembled chains do not span");
  GMat p0mat = columns_matrix(m_list, dm) * *bin_inv;

  // Extend over the invertible part and change back to carrier coordinates.
  Triple model = msynth;
  GMat pfull(dm + winv.dim(), n);
  if (winv.dim() == 0) {
    std::optional<GMat> w0inv = inverse(w0.basis);
    if (!w0inv)
      fail(ErrorName::ConditionViolated, "split basis is singular");
    pfull = p0mat * *w0inv;
  } else {
    model = extend_model(msynth, sp, p.a, winv);
    GMat b = hcat(w0.basis, winv.basis);
    std::optional<GMat> binv = inverse(b);
    if (!binv)
      fail(ErrorName::ConditionViolated, "split basis is singular");
    GMat d(dm + winv.dim(), n);
    for (std::size_t i = 0; i < dm; ++i)
      for (std::size_t j = 0; j < w0.dim(); ++j) d.at(i, j) = p0mat.at(i, j);
    for (std::size_t i = 0; i < winv.dim(); ++i)
      d.at(dm + i, w0.dim() + i) = G(1);
    pfull = d * *binv;
  }

  verify_witness(sp, p.a, *v0c, model, pfull);

  ClassificationResult out;
  out.core = core;
  out.residual_types = std::move(agg);
  out.unclassified_residual = std::move(unres);
  out.witness = std::move(pfull);
  out.model = std::move(model);
  out.condition_eigenvalue = t.condition_eigenvalue;
  return out;
}

}  // namespace orbitforge
