#include "orbitforge/space.hpp"

#include <sstream>

namespace orbitforge {
namespace {

Mat<GaussianRational> signature_matrix(std::size_t neg, std::size_t pos) {
  Mat<GaussianRational> m(neg + pos, neg + pos);
  for (std::size_t i = 0; i < neg; ++i) m.at(i, i) = GaussianRational(-1);
  for (std::size_t i = neg; i < neg + pos; ++i) m.at(i, i) = GaussianRational(1);
  return m;
}

Mat<GaussianRational> alternating_j(std::size_t n) {
  Mat<GaussianRational> m(n, n);
  std::size_t half = n / 2;
  for (std::size_t i = 0; i < half; ++i) {
    m.at(i, half + i) = GaussianRational(1);
    m.at(half + i, i) = GaussianRational(-1);
  }
  return m;
}

bool has_sigma_family(Family f) { return f != Family::GlTauStar; }

int sigma_sign_of(Family f) {
  switch (f) {
    case Family::GlSigmaPlus:
    case Family::OSigmaPlus:
    case Family::SpSigmaPlus:
      return 1;
    case Family::GlSigmaMinus:
    case Family::OSigmaMinus:
    case Family::SpSigmaMinus:
      return -1;
    case Family::GlTauStar:
      return 0;
  }
  return 0;
}

std::optional<FormKind> form_kind_of(Family f) {
  switch (f) {
    case Family::GlSigmaPlus:
    case Family::GlSigmaMinus:
      return std::nullopt;
    case Family::GlTauStar:
      return FormKind::Hermitian;
    case Family::OSigmaPlus:
    case Family::OSigmaMinus:
      return FormKind::Symmetric;
    case Family::SpSigmaPlus:
    case Family::SpSigmaMinus:
      return FormKind::Alternating;
  }
  return std::nullopt;
}

}  // namespace

std::string_view family_token(Family f) {
  switch (f) {
    case Family::GlSigmaPlus: return "gl_sigma_plus";
    case Family::GlSigmaMinus: return "gl_sigma_minus";
    case Family::GlTauStar: return "gl_tau_star";
    case Family::OSigmaPlus: return "o_sigma_plus";
    case Family::OSigmaMinus: return "o_sigma_minus";
    case Family::SpSigmaPlus: return "sp_sigma_plus";
    case Family::SpSigmaMinus: return "sp_sigma_minus";
  }
  return "";
}

std::string_view family_prefix(Family f) {
  switch (f) {
    case Family::GlSigmaPlus: return "gl+";
    case Family::GlSigmaMinus: return "gl-";
    case Family::GlTauStar: return "gl*";
    case Family::OSigmaPlus: return "o+";
    case Family::OSigmaMinus: return "o-";
    case Family::SpSigmaPlus: return "sp+";
    case Family::SpSigmaMinus: return "sp-";
  }
  return "";
}

Family family_from_token(std::string_view token) {
  for (Family f : kAllFamilies)
    if (family_token(f) == token) return f;
  fail(ErrorName::WrongFamily, "unknown family token: " + std::string(token));
}

Family family_from_prefix(std::string_view prefix) {
  for (Family f : kAllFamilies)
    if (family_prefix(f) == prefix) return f;
  fail(ErrorName::WrongFamily, "unknown family prefix: " + std::string(prefix));
}

std::string_view form_kind_token(FormKind k) {
  switch (k) {
    case FormKind::Symmetric: return "symmetric";
    case FormKind::Alternating: return "alternating";
    case FormKind::Hermitian: return "hermitian";
  }
  return "";
}

FormKind form_kind_from_token(std::string_view token) {
  if (token == "symmetric") return FormKind::Symmetric;
  if (token == "alternating") return FormKind::Alternating;
  if (token == "hermitian") return FormKind::Hermitian;
  fail(ErrorName::ParseError, "unknown form kind: " + std::string(token));
}

bool family_has_form(Family f) {
  return f != Family::GlSigmaPlus && f != Family::GlSigmaMinus;
}

FormKind family_form_kind(Family f) {
  switch (f) {
    case Family::GlTauStar:
      return FormKind::Hermitian;
    case Family::OSigmaPlus:
    case Family::OSigmaMinus:
      return FormKind::Symmetric;
    default:
      return FormKind::Alternating;
  }
}

std::optional<int> family_sigma_sign(Family f) {
  switch (f) {
    case Family::GlTauStar:
      return std::nullopt;
    case Family::GlSigmaPlus:
    case Family::OSigmaPlus:
    case Family::SpSigmaPlus:
      return 1;
    default:
      return -1;
  }
}

GaussianRational evaluate_form(const Form& f, const Vec<GaussianRational>& u,
                               const Vec<GaussianRational>& v) {
  const std::size_t n = f.t.rows();
  if (u.size() != n || v.size() != n || f.t.cols() != n)
    fail(ErrorName::DimensionMismatch, "form evaluation shapes");
  GaussianRational acc(0);
  if (f.kind == FormKind::Hermitian) {
    for (std::size_t i = 0; i < n; ++i) {
      if (u[i].is_zero()) continue;
      const GaussianRational ui = conj(u[i]);
      for (std::size_t j = 0; j < n; ++j) acc += ui * f.t.at(i, j) * v[j];
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      if (v[i].is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) acc += v[i] * f.t.at(i, j) * u[j];
    }
  }
  return acc;
}

Vec<GaussianRational> apply_sigma(const AntiLinearMap& m, const Vec<GaussianRational>& v) {
  Vec<GaussianRational> c(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) c[i] = conj(v[i]);
  return m.s * c;
}

std::string CheckReport::joined() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (i) os << "; ";
    os << failures[i];
  }
  return os.str();
}

AntiLinearMap standard_sigma(Family f, std::size_t n, std::size_t p) {
  if (n == 0) fail(ErrorName::DimensionMismatch, "empty space");
  const std::size_t m = n / 2;
  switch (f) {
    case Family::GlSigmaPlus:
      return {Mat<GaussianRational>::identity(n), 1};
    case Family::OSigmaPlus:
      if (2 * p > n) fail(ErrorName::BadSignatureParam, "o_sigma_plus needs p <= n/2");
      return {signature_matrix(n - p, p), 1};
    case Family::SpSigmaPlus:
      if (n % 2 != 0) fail(ErrorName::BadParity, "sp_sigma_plus needs even n");
      return {Mat<GaussianRational>::identity(n), 1};
    case Family::GlSigmaMinus:
    case Family::OSigmaMinus: {
      if (n % 2 != 0) fail(ErrorName::BadParity, "sigma_minus needs even n");
      Mat<GaussianRational> s(n, n);
      for (std::size_t i = 0; i < m; ++i) {
        s.at(i, m + i) = GaussianRational(-1);
        s.at(m + i, i) = GaussianRational(1);
      }
      return {std::move(s), -1};
    }
    case Family::SpSigmaMinus: {
      if (n % 2 != 0) fail(ErrorName::BadParity, "sp_sigma_minus needs even n");
      if (4 * p > n) fail(ErrorName::BadSignatureParam, "sp_sigma_minus needs p <= n/4");
      Mat<GaussianRational> a = signature_matrix(m - p, p);
      Mat<GaussianRational> s(n, n);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          s.at(i, m + j) = -a.at(i, j);
          s.at(m + i, j) = a.at(i, j);
        }
      return {std::move(s), -1};
    }
    case Family::GlTauStar:
      fail(ErrorName::WrongFamily, "gl_tau_star has no sigma");
  }
  fail(ErrorName::WrongFamily, "unreachable family");
}

StructuredSpace standard_space(Family f, std::size_t n, std::size_t p) {
  if (n == 0) fail(ErrorName::DimensionMismatch, "empty space");
  StructuredSpace sp;
  sp.dim = n;
  sp.family = f;
  switch (f) {
    case Family::GlSigmaPlus:
    case Family::GlSigmaMinus:
      sp.sigma = standard_sigma(f, n, p);
      break;
    case Family::GlTauStar:
      if (2 * p > n) fail(ErrorName::BadSignatureParam, "gl_tau_star needs p <= n/2");
      sp.form = Form{signature_matrix(n - p, p), FormKind::Hermitian};
      break;
    case Family::OSigmaPlus:
    case Family::OSigmaMinus:
      sp.sigma = standard_sigma(f, n, p);
      sp.form = Form{Mat<GaussianRational>::identity(n), FormKind::Symmetric};
      break;
    case Family::SpSigmaPlus:
    case Family::SpSigmaMinus:
      sp.sigma = standard_sigma(f, n, p);
      sp.form = Form{alternating_j(n), FormKind::Alternating};
      break;
  }
  return sp;
}

CheckReport check_compatibility(const StructuredSpace& space) {
  CheckReport r;
  const std::size_t n = space.dim;
  r.require(n > 0, "empty space");
  if (!r.ok) return r;

  const auto want_kind = form_kind_of(space.family);
  r.require(space.form.has_value() == want_kind.has_value(), "form presence mismatches family");
  r.require(space.sigma.has_value() == has_sigma_family(space.family),
            "sigma presence mismatches family");

  if (space.sigma) {
    const auto& s = space.sigma->s;
    r.require(s.rows() == n && s.cols() == n, "sigma matrix shape");
    r.require(space.sigma->sign == sigma_sign_of(space.family), "sigma sign mismatches family");
    if (space.sigma->sign == -1) r.require(n % 2 == 0, "sigma_minus needs even dimension");
    if (r.ok) {
      Mat<GaussianRational> ss = s * s.conjugate();
      Mat<GaussianRational> want = Mat<GaussianRational>::identity(n);
      if (space.sigma->sign == -1) want = -want;
      r.require(ss == want, "sigma^2 != sign * id");
    }
  }
  if (space.form) {
    const auto& t = space.form->t;
    r.require(t.rows() == n && t.cols() == n, "form matrix shape");
    if (want_kind) r.require(space.form->kind == *want_kind, "form kind mismatches family");
    if (r.ok) {
      switch (space.form->kind) {
        case FormKind::Symmetric:
          r.require(t.transpose() == t, "form matrix not symmetric");
          break;
        case FormKind::Alternating:
          r.require(t.transpose() == -t, "form matrix not alternating");
          break;
        case FormKind::Hermitian:
          r.require(t.conjugate_transpose() == t, "form matrix not hermitian");
          break;
      }
      r.require(!det(t).is_zero(), "form degenerate");
    }
  }
  if (r.ok && space.form && space.sigma) {
    const auto& t = space.form->t;
    const auto& s = space.sigma->s;
    r.require(s.transpose() * t * s == t.conjugate(), "sigma does not satisfy sigma* tau = conj(tau)");
  }
  return r;
}

CheckReport group_membership(const StructuredSpace& space, const Mat<GaussianRational>& g) {
  CheckReport r;
  r.require(g.rows() == space.dim && g.cols() == space.dim, "element shape");
  if (!r.ok) return r;
  r.require(!det(g).is_zero(), "element not invertible");
  if (space.sigma) r.require(g * space.sigma->s == space.sigma->s * g.conjugate(), "element does not commute with sigma");
  if (space.form) {
    const auto& t = space.form->t;
    if (space.form->kind == FormKind::Hermitian)
      r.require(g.conjugate_transpose() * t * g == t, "element does not preserve the hermitian form");
    else
      r.require(g.transpose() * t * g == t, "element does not preserve the form");
  }
  return r;
}

CheckReport algebra_membership(const StructuredSpace& space, const Mat<GaussianRational>& x) {
  CheckReport r;
  r.require(x.rows() == space.dim && x.cols() == space.dim, "element shape");
  if (!r.ok) return r;
  if (space.sigma) r.require(x * space.sigma->s == space.sigma->s * x.conjugate(), "element does not commute with sigma");
  if (space.form) {
    const auto& t = space.form->t;
    if (space.form->kind == FormKind::Hermitian)
      r.require((x.conjugate_transpose() * t + t * x).is_zero(), "element not infinitesimally isometric");
    else
      r.require((t * x + x.transpose() * t).is_zero(), "element not infinitesimally isometric");
  }
  return r;
}

CheckReport isotropy_group_membership(const StructuredSpace& space, const Mat<GaussianRational>& g,
                                      const Vec<GaussianRational>& v0) {
  CheckReport r = group_membership(space, g);
  if (g.rows() == space.dim && v0.size() == space.dim)
    r.require(g * v0 == v0, "element does not fix v0");
  else
    r.require(v0.size() == space.dim, "v0 shape");
  return r;
}

CheckReport isotropy_membership(const StructuredSpace& space, const Mat<GaussianRational>& x,
                                const Vec<GaussianRational>& v0) {
  SpecialReport sr = is_special_vector(space, v0);
  if (!sr.special) {
    std::string what = "v0 not special";
    for (const auto& f : sr.failures) what += "; " + f;
    fail(ErrorName::NotSpecial, what);
  }
  CheckReport r = algebra_membership(space, x);
  if (x.rows() == space.dim) r.require(vec_is_zero(x * v0), "element does not annihilate v0");
  return r;
}

SpecialReport is_special_vector(const StructuredSpace& space, const Vec<GaussianRational>& v) {
  if (v.size() != space.dim) fail(ErrorName::DimensionMismatch, "vector shape");
  if (vec_is_zero(v)) fail(ErrorName::ZeroVector, "special vectors are nonzero");
  SpecialReport rep;
  rep.special = true;
  if (space.sigma) {
    bool found = false;
    if (space.sigma->sign == 1) {
      Vec<GaussianRational> sv = apply_sigma(*space.sigma, v);
      for (int e : {1, -1}) {
        if (sv == vec_scale(GaussianRational(e), v)) {
          rep.sigma_eigenvalue = GaussianRational(e);
          found = true;
          break;
        }
      }
    } else {
      Vec<GaussianRational> sv = space.sigma->s * v;
      for (int e : {1, -1}) {
        GaussianRational lambda = GaussianRational(e) * GaussianRational::i();
        if (sv == vec_scale(lambda, v)) {
          rep.sigma_eigenvalue = lambda;
          found = true;
          break;
        }
      }
    }
    if (!found) {
      rep.special = false;
      rep.failures.push_back(space.sigma->sign == 1 ? "not an eigenvector of sigma"
                                                    : "not an eigenvector of the linearized sigma");
    }
  }
  if (space.form) {
    rep.isotropic = evaluate_form(*space.form, v, v).is_zero();
    if (!rep.isotropic) {
      rep.special = false;
      rep.failures.push_back("not isotropic");
    }
  }
  return rep;
}

std::vector<SectorBasis> sector_bases(const StructuredSpace& space) {
  std::vector<SectorBasis> out;
  const std::size_t n = space.dim;
  if (!space.sigma) {
    out.push_back({Mat<GaussianRational>::identity(n), false, std::nullopt});
    return out;
  }
  const auto& s = space.sigma->s;
  if (space.sigma->sign == 1) {
    Mat<Rational> re = real_part(s), im = imag_part(s);
    for (int e : {1, -1}) {
      // sigma(x + iy) = e (x + iy) componentwise over the reals
      Mat<Rational> sys(2 * n, 2 * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          sys.at(i, j) = re.at(i, j) - (i == j ? Rational(e) : Rational(0));
          sys.at(i, n + j) = im.at(i, j);
          sys.at(n + i, j) = im.at(i, j);
          sys.at(n + i, n + j) = -re.at(i, j) - (i == j ? Rational(e) : Rational(0));
        }
      Mat<Rational> ker = kernel(sys);
      Mat<GaussianRational> basis(n, ker.cols());
      for (std::size_t c = 0; c < ker.cols(); ++c)
        for (std::size_t i = 0; i < n; ++i)
          basis.at(i, c) = GaussianRational(ker.at(i, c), ker.at(n + i, c));
      out.push_back({std::move(basis), true, GaussianRational(e)});
    }
  } else {
    for (int e : {1, -1}) {
      GaussianRational lambda = GaussianRational(e) * GaussianRational::i();
      Mat<GaussianRational> shifted = s;
      for (std::size_t i = 0; i < n; ++i) shifted.at(i, i) -= lambda;
      out.push_back({kernel(shifted), false, lambda});
    }
  }
  return out;
}

std::optional<std::size_t> signature_param(const StructuredSpace& space) {
  if (space.family == Family::GlTauStar) {
    if (!space.form) return std::nullopt;
    Inertia in = hermitian_inertia(space.form->t);
    return std::min(in.positive, in.negative);
  }
  if (space.family == Family::OSigmaPlus || space.family == Family::SpSigmaMinus) {
    if (!space.form || !space.sigma) return std::nullopt;
    Mat<GaussianRational> h = space.sigma->s.transpose() * space.form->t.transpose();
    if (!(h.conjugate_transpose() == h)) return std::nullopt;
    Inertia in = hermitian_inertia(h);
    std::size_t small = std::min(in.positive, in.negative);
    if (space.family == Family::SpSigmaMinus) {
      if (small % 2 != 0) return std::nullopt;
      return small / 2;
    }
    return small;
  }
  return std::nullopt;
}

Mat<Rational> realify_columns(const Mat<GaussianRational>& a) {
  Mat<Rational> m(2 * a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      m.at(i, j) = a.at(i, j).re();
      m.at(a.rows() + i, j) = a.at(i, j).im();
    }
  return m;
}

std::optional<Vec<Rational>> solve_real(const Mat<GaussianRational>& a,
                                        const Vec<GaussianRational>& b) {
  Vec<Rational> rhs(2 * b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    rhs[i] = b[i].re();
    rhs[b.size() + i] = b[i].im();
  }
  return solve(realify_columns(a), rhs);
}

}  // namespace orbitforge
