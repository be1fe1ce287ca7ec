#include <orbitforge/equivalence.hpp>

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <orbitforge/errors.hpp>

namespace orbitforge {

namespace {

using GMat = Mat<GaussianRational>;
using GVec = Vec<GaussianRational>;
using G = GaussianRational;
using Q = Rational;

bool same_mat(const GMat& x, const GMat& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      if (!(x.at(i, j) == y.at(i, j))) return false;
  return true;
}

std::optional<std::string> isotropy_failure(const StructuredSpace& sp,
                                            const GVec& v0, const GMat& p) {
  if (p.rows() != sp.dim || p.cols() != sp.dim) return "wrong dimensions";
  if (!inverse(p)) return "not invertible";
  if (sp.sigma &&
      !same_mat(sp.sigma->s * p.conjugate(), p * sp.sigma->s))
    return "does not commute with sigma";
  if (sp.form) {
    GMat pulled = sp.form->kind == FormKind::Hermitian
                      ? p.conjugate().transpose() * sp.form->t * p
                      : p.transpose() * sp.form->t * p;
    if (!same_mat(pulled, sp.form->t)) return "does not preserve the form";
  }
  if (!(p * v0 == v0)) return "does not fix the marked vector";
  return std::nullopt;
}

// ---- seeded elementary moves ----

struct Gen {
  const StructuredSpace& sp;
  const GVec& v0;
  std::mt19937_64 rng;
  std::size_t n;

  Gen(const StructuredSpace& s, const GVec& v, std::uint64_t seed)
      : sp(s), v0(v), rng(seed), n(s.dim) {}

  int pick(int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  std::size_t coord() { return static_cast<std::size_t>(pick(0, int(n) - 1)); }
  Q smallq() { return Q(pick(-2, 2)) / Q(pick(1, 3)); }
  Q smallq_nz() {
    Q r = smallq();
    return r.is_zero() ? Q(1) : r;
  }
  G smallg(bool allow_imag) {
    return allow_imag ? G(smallq(), smallq()) : G(smallq());
  }
  GVec rand_vec(bool allow_imag) {
    GVec x(n, G(0));
    int picks = pick(1, 3);
    for (int k = 0; k < picks; ++k) {
      std::size_t i = coord();
      x[i] = x[i] + smallg(allow_imag);
    }
    return x;
  }

  G tau(const GVec& u, const GVec& v) const {
    return evaluate_form(*sp.form, u, v);
  }
  // row vector r with tau-against-u as the linear functional r . x
  GVec pairing_row(const GVec& u) const {
    bool herm = sp.form->kind == FormKind::Hermitian;
    GVec r = sp.form->t.transpose() * (herm ? [&] {
      GVec c = u;
      for (G& g : c) g = g.conjugate();
      return c;
    }() : u);
    return r;
  }
};

void add_outer(GMat& m, const G& c, const GVec& col, const GVec& row) {
  if (c.is_zero()) return;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (col[i].is_zero()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j)
      m.at(i, j) = m.at(i, j) + c * col[i] * row[j];
  }
}

// sigma-sector projection for sigma_+ families: lands in the eigenvalue-e part
GVec sector_project(const StructuredSpace& sp, const GVec& x, int e) {
  GVec sx = apply_sigma(*sp.sigma, x);
  GVec out = x;
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (out[i] + G(e) * sx[i]) * G(Q(1) / Q(2));
  return out;
}

std::optional<GVec> find_isotropic(Gen& g) {
  if (!g.sp.form) return std::nullopt;
  if (g.tau(g.v0, g.v0).is_zero()) return g.v0;
  for (int tries = 0; tries < 4; ++tries) {
    GVec x = g.rand_vec(true);
    if (!vec_is_zero(x) && g.tau(x, x).is_zero()) return x;
  }
  return std::nullopt;
}

// Eichler-type map from an isotropic u and a tau-orthogonal w:
//   x -> x + a f_u(x) w + b f_w(x) u + c2 f_u(x) u
// with (a, b, c2) chosen per form kind so the form is preserved exactly.
std::optional<GMat> move_eichler(Gen& g) {
  if (!g.sp.form) return std::nullopt;
  std::optional<GVec> uo = find_isotropic(g);
  if (!uo) return std::nullopt;
  GVec u = *uo;
  bool herm = g.sp.form->kind == FormKind::Hermitian;
  bool alt = g.sp.form->kind == FormKind::Alternating;
  bool splus = g.sp.sigma && g.sp.sigma->sign == 1;

  int eig = 1;
  if (splus) {
    GVec su = apply_sigma(*g.sp.sigma, u);
    if (su == u)
      eig = 1;
    else if (su == vec_scale(G(-1), u))
      eig = -1;
    else
      return std::nullopt;  // u not sigma-aligned
  }
  GVec w = g.rand_vec(!splus);
  if (splus) w = sector_project(g.sp, w, eig);
  // make w tau-orthogonal to u using a dual vector
  GVec dual(g.n, G(0));
  bool found = false;
  for (std::size_t j = 0; j < g.n && !found; ++j) {
    GVec e(g.n, G(0));
    e[j] = G(1);
    if (splus) e = sector_project(g.sp, e, eig);
    if (!g.tau(u, e).is_zero()) {
      dual = e;
      found = true;
    }
  }
  if (!found) return std::nullopt;
  w = vec_sub(w, vec_scale(g.tau(u, w) / g.tau(u, dual), dual));
  if (vec_is_zero(w)) return std::nullopt;
  if (!g.tau(u, w).is_zero() || !g.tau(w, u).is_zero()) return std::nullopt;

  G a = splus ? G(g.smallq_nz()) : G(g.smallq(), herm ? g.smallq() : Q(0));
  if (a.is_zero()) a = G(1);
  G b, c2;
  if (herm) {
    b = -a.conjugate();
    G qw = g.tau(w, w);
    c2 = G(-(a.norm() * qw.re()) / Q(2), g.smallq());
  } else if (alt) {
    b = a;
    c2 = G(g.smallq());
  } else {
    b = -a;
    c2 = -(a * a * g.tau(w, w)) * G(Q(1) / Q(2));
  }
  GMat m = GMat::identity(g.n);
  GVec ru = g.pairing_row(u), rw = g.pairing_row(w);
  add_outer(m, a, w, ru);
  add_outer(m, b, u, rw);
  add_outer(m, c2, u, ru);
  return m;
}

// rank-one symplectic / unitary transvection at an isotropic vector
std::optional<GMat> move_transvection(Gen& g) {
  if (!g.sp.form) return std::nullopt;
  if (g.sp.form->kind == FormKind::Symmetric) return std::nullopt;
  std::optional<GVec> uo = find_isotropic(g);
  if (!uo) return std::nullopt;
  G c = g.sp.form->kind == FormKind::Hermitian ? G(Q(0), g.smallq_nz())
                                               : G(g.smallq_nz());
  GMat m = GMat::identity(g.n);
  add_outer(m, c, *uo, g.pairing_row(*uo));
  return m;
}

// diagonal rescale of a dual coordinate pair, extended over sigma partners
std::optional<GMat> move_rescale(Gen& g) {
  std::size_t i = g.coord(), j = g.coord();
  if (i == j) return std::nullopt;
  static const Q choices[] = {Q(2), Q(3), Q(1) / Q(2), Q(2) / Q(3), Q(5)};
  Q c = choices[g.pick(0, 4)];
  std::vector<G> diag(g.n, G(1));
  auto orbit = [&](std::size_t k, const Q& val) {
    diag[k] = G(val);
    if (g.sp.sigma) {
      for (std::size_t r = 0; r < g.n; ++r)
        if (!g.sp.sigma->s.at(r, k).is_zero()) diag[r] = G(val);
    }
  };
  orbit(i, c);
  orbit(j, Q(1) / c);
  GMat m(g.n, g.n);
  for (std::size_t k = 0; k < g.n; ++k) m.at(k, k) = diag[k];
  return m;
}

// pythagorean rotation of two coordinates, repeated over sigma partners
std::optional<GMat> move_rotation(Gen& g) {
  std::size_t i = g.coord(), j = g.coord();
  if (i == j) return std::nullopt;
  static const std::pair<int, int> pyth[] = {{3, 4}, {5, 12}, {0, 1}};
  auto [pa, pb] = pyth[g.pick(0, 2)];
  int hyp = pa == 0 ? 1 : (pa == 3 ? 5 : 13);
  Q p = Q(pa) / Q(hyp), q = Q(pb) / Q(hyp);
  if (g.pick(0, 1)) q = -q;
  GMat m = GMat::identity(g.n);
  auto put = [&](std::size_t a, std::size_t b) {
    m.at(a, a) = G(p);
    m.at(a, b) = G(q);
    m.at(b, a) = G(-q);
    m.at(b, b) = G(p);
  };
  put(i, j);
  if (g.sp.sigma) {
    std::size_t pi = i, pj = j;
    for (std::size_t r = 0; r < g.n; ++r) {
      if (!g.sp.sigma->s.at(r, i).is_zero()) pi = r;
      if (!g.sp.sigma->s.at(r, j).is_zero()) pj = r;
    }
    if ((pi != i || pj != j) && pi != pj && pi != j && pj != i) put(pi, pj);
  }
  return m;
}

// elementary shear for the form-free families, sigma partners mirrored
std::optional<GMat> move_gl_shear(Gen& g) {
  if (g.sp.form) return std::nullopt;
  std::size_t i = g.coord(), j = g.coord();
  if (i == j) return std::nullopt;
  G c = g.smallg(true);
  if (c.is_zero()) c = G(1);
  GMat m = GMat::identity(g.n);
  m.at(i, j) = m.at(i, j) + c;
  if (g.sp.sigma) {
    std::size_t pi = i, pj = j;
    G si(0), sj(0);
    for (std::size_t r = 0; r < g.n; ++r) {
      if (!g.sp.sigma->s.at(r, i).is_zero()) {
        pi = r;
        si = g.sp.sigma->s.at(r, i);
      }
      if (!g.sp.sigma->s.at(r, j).is_zero()) {
        pj = r;
        sj = g.sp.sigma->s.at(r, j);
      }
    }
    if (pi != i || pj != j)
      m.at(pi, pj) = m.at(pi, pj) + si * c.conjugate() * sj.inverse();
  }
  return m;
}

// sigma-conjugate S conj(E) S^{-1}; composing E with it commutes with sigma
// whenever the two factors commute.
GMat sigma_partner_move(const StructuredSpace& sp, const GMat& e) {
  GMat si = *inverse(sp.sigma->s);
  return sp.sigma->s * e.conjugate() * si;
}

}  // namespace

Mat<GaussianRational> random_isotropy_element(const StructuredSpace& space,
                                              const Vec<GaussianRational>& v0,
                                              std::uint64_t seed) {
  SpecialReport rep = is_special_vector(space, v0);
  if (!rep.special)
    fail(ErrorName::NotSpecial, "cannot build isotropy moves at this vector");
  GMat p = GMat::identity(space.dim);
  if (space.dim <= 1 || seed == 0) return p;

  Gen g(space, v0, seed);
  int accepted = 0;
  const int want = g.pick(2, 5);
  for (int attempt = 0; attempt < 160 && accepted < want; ++attempt) {
    std::optional<GMat> mv;
    switch (g.pick(0, 4)) {
      case 0: mv = move_eichler(g); break;
      case 1: mv = move_transvection(g); break;
      case 2: mv = move_rescale(g); break;
      case 3: mv = move_rotation(g); break;
      default: mv = move_gl_shear(g); break;
    }
    if (!mv) continue;
    if (isotropy_failure(space, v0, *mv)) {
      // try the sigma-symmetrized composite before giving up on the move
      if (!space.sigma) continue;
      GMat f = sigma_partner_move(space, *mv) * *mv;
      if (isotropy_failure(space, v0, f)) continue;
      mv = std::move(f);
    }
    p = *mv * p;
    ++accepted;
  }
  if (isotropy_failure(space, v0, p))
    fail(ErrorName::GenerationFailed, "assembled element failed verification");
  return p;
}

Triple conjugate_triple(const Triple& t, const Mat<GaussianRational>& p) {
  if (p.rows() != t.pair.space.dim || p.cols() != t.pair.space.dim)
    fail(ErrorName::NotInIsotropyGroup, "wrong dimensions");
  std::optional<GMat> pi = inverse(p);
  if (!pi) fail(ErrorName::NotInIsotropyGroup, "not invertible");
  if (std::optional<std::string> why =
          isotropy_failure(t.pair.space, t.v0, p))
    fail(ErrorName::NotInIsotropyGroup, *why);
  Pair np = make_pair(t.pair.space, p * t.pair.y * *pi,
                      make_subspace(p * t.pair.carrier.basis));
  return make_triple(std::move(np), t.v0);
}

EquivalenceResult triples_equivalent(const Triple& a, const Triple& b) {
  if (a.pair.space.family != b.pair.space.family)
    fail(ErrorName::FamilyMismatch, "triples live in different families");
  if (a.pair.space.dim != b.pair.space.dim)
    fail(ErrorName::DimensionMismatch, "ambient dimensions differ");

  ClassificationResult ra = classify(a);
  ClassificationResult rb = classify(b);

  EquivalenceResult out;
  if (!(ra.core == rb.core)) {
    out.detail = "core labels differ: " + distinguished_label_string(ra.core) +
                 " vs " + distinguished_label_string(rb.core);
    return out;
  }
  if (!(ra.residual_types == rb.residual_types)) {
    out.detail = "residual types differ: " +
                 type_list_string(a.pair.space.family, ra.residual_types) +
                 " vs " +
                 type_list_string(b.pair.space.family, rb.residual_types);
    return out;
  }
  if (gauge_rigid(ra.core) &&
      !(ra.condition_eigenvalue == rb.condition_eigenvalue)) {
    out.detail = "sigma-eigenvalues of the marked vectors differ";
    return out;
  }
  if (ra.unclassified_residual.has_value() ||
      rb.unclassified_residual.has_value()) {
    // decide only what the witnesses certify: identical invertible blocks
    const Triple& ma = ra.model;
    const Triple& mb = rb.model;
    bool identical =
        ma.pair.space.dim == mb.pair.space.dim &&
        same_mat(ma.pair.y, mb.pair.y) &&
        (!ma.pair.space.form ||
         same_mat(ma.pair.space.form->t, mb.pair.space.form->t)) &&
        (!ma.pair.space.sigma ||
         same_mat(ma.pair.space.sigma->s, mb.pair.space.sigma->s));
    if (!identical)
      fail(ErrorName::NotNilpotent,
           "invertible parts present and not literally identical; their "
           "equivalence is not decided");
  }

  GMat p = *inverse(rb.witness) * ra.witness;
  const StructuredSpace& sa = a.pair.on_carrier;
  const StructuredSpace& sb = b.pair.on_carrier;
  std::optional<GVec> va = solve(a.pair.carrier.basis, a.v0);
  std::optional<GVec> vb = solve(b.pair.carrier.basis, b.v0);
  if (!va || !vb)
    fail(ErrorName::ConditionViolated, "marked vector left the carrier");
  bool ok = same_mat(p * a.pair.a, b.pair.a * p) && (p * *va == *vb);
  if (ok && sa.sigma)
    ok = same_mat(sb.sigma->s * p.conjugate(), p * sa.sigma->s);
  if (ok && sa.form) {
    GMat pulled = sa.form->kind == FormKind::Hermitian
                      ? p.conjugate().transpose() * sb.form->t * p
                      : p.transpose() * sb.form->t * p;
    ok = same_mat(pulled, sa.form->t);
  }
  if (!ok)
    fail(ErrorName::ConditionViolated,
         "composed witness failed exact verification");
  out.equivalent = true;
  out.witness = std::move(p);
  return out;
}

}  // namespace orbitforge
