#include <orbitforge/pair.hpp>

#include <utility>

#include <orbitforge/errors.hpp>
#include <orbitforge/typelabel.hpp>

namespace orbitforge {

StructuredSpace restrict_space(const StructuredSpace& space, const Subspace& w) {
  if (w.ambient_dim != space.dim) {
    fail(ErrorName::DimensionMismatch, "subspace ambient dimension");
  }
  const Mat<GaussianRational>& c = w.basis;
  StructuredSpace out;
  out.dim = w.dim();
  out.family = space.family;
  if (space.form) {
    Mat<GaussianRational> left = space.form->kind == FormKind::Hermitian
                                     ? c.conjugate().transpose()
                                     : c.transpose();
    out.form = Form{left * space.form->t * c, space.form->kind};
  }
  if (space.sigma) {
    auto s_w = solve_matrix(c, space.sigma->s * c.conjugate());
    if (!s_w) fail(ErrorName::NotInvariant, "subspace not sigma-invariant");
    out.sigma = AntiLinearMap{std::move(*s_w), space.sigma->sign};
  }
  return out;
}

Pair make_pair(StructuredSpace space, Mat<GaussianRational> y, Subspace carrier) {
  if (y.rows() != space.dim || y.cols() != space.dim) {
    fail(ErrorName::DimensionMismatch, "operator shape");
  }
  Pair p;
  p.a = restrict_to(y, carrier);
  p.on_carrier = restrict_space(space, carrier);
  if (carrier.dim() > 0) {
    CheckReport structure = check_compatibility(p.on_carrier);
    if (!structure.ok) {
      fail(ErrorName::ConditionViolated, "carrier structure: " + structure.joined());
    }
    CheckReport membership = algebra_membership(p.on_carrier, p.a);
    if (!membership.ok) {
      fail(ErrorName::ConditionViolated, "restricted operator: " + membership.joined());
    }
  }
  p.space = std::move(space);
  p.y = std::move(y);
  p.carrier = std::move(carrier);
  return p;
}

Pair make_full_pair(StructuredSpace space, Mat<GaussianRational> y) {
  std::size_t n = space.dim;
  return make_pair(std::move(space), std::move(y), full_subspace(n));
}

ReducedPair reduced_pair(const Pair& p) {
  std::size_t w = p.carrier.dim();
  ReducedPair out;
  if (w == 0) {
    out.lift = Mat<GaussianRational>(p.space.dim, 0);
    return out;
  }
  std::size_t h = nilpotency_height(p.a);
  std::size_t chains = kernel(p.a).cols();
  if (w != (h + 1) * chains) {
    fail(ErrorName::NotUniform, "carrier is not uniform: dim " + std::to_string(w) +
                                    ", height " + std::to_string(h) + ", kernel " +
                                    std::to_string(chains));
  }
  out.h = h;
  out.dim = chains;

  Mat<GaussianRational> lift = standard_complement(p.a, w);
  Mat<GaussianRational> yh = mpow(p.a, h);

  if (p.on_carrier.form) {
    const Form& f = *p.on_carrier.form;
    Mat<GaussianRational> gram(chains, chains);
    Mat<GaussianRational> shifted = yh * lift;
    for (std::size_t i = 0; i < chains; ++i) {
      for (std::size_t j = 0; j < chains; ++j) {
        gram.at(i, j) = evaluate_form(f, lift.col(i), shifted.col(j));
      }
    }
    // Stored so that evaluate_form on quotient coordinates reproduces the
    // values: bilinear tau(u,v) = v^T t u wants the transpose.
    Mat<GaussianRational> stored =
        f.kind == FormKind::Hermitian ? gram : gram.transpose();
    FormKind kind = f.kind == FormKind::Hermitian
                        ? FormKind::Hermitian
                        : reduced_form_kind(f.kind, h);
    if (rank(stored) != chains) {
      fail(ErrorName::ConditionViolated, "degenerate reduced form");
    }
    out.tau_bar = Form{std::move(stored), kind};
  }

  if (p.on_carrier.sigma) {
    const AntiLinearMap& s = *p.on_carrier.sigma;
    Mat<GaussianRational> mapped = s.s * lift.conjugate();
    auto coords = solve_matrix(hcat(lift, p.a), mapped);
    if (!coords) fail(ErrorName::ConditionViolated, "quotient sigma does not close");
    out.sigma_bar = AntiLinearMap{coords->submatrix(0, 0, chains, chains), s.sign};
  }

  out.lift = p.carrier.basis * lift;
  return out;
}

}  // namespace orbitforge
