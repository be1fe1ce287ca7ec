#include <orbitforge/quaternionify.hpp>

#include <orbitforge/errors.hpp>

namespace orbitforge {

Vec<GaussianRational> quaternion_scale(const RationalQuaternion& q,
                                       const Vec<GaussianRational>& v,
                                       const AntiLinearMap& sigma) {
  Vec<GaussianRational> out = vec_scale(q.complex_part(), v);
  if (!q.j_part().is_zero()) {
    out = vec_add(out, vec_scale(q.j_part(), apply_sigma(sigma, v)));
  }
  return out;
}

Vec<RationalQuaternion> rho(const Vec<GaussianRational>& v) {
  if (v.size() % 2 != 0) {
    fail(ErrorName::BadParity, "rho needs an even-dimensional vector");
  }
  std::size_t m = v.size() / 2;
  Vec<RationalQuaternion> out(m);
  for (std::size_t l = 0; l < m; ++l) {
    out[l] = RationalQuaternion(v[l], v[m + l]);
  }
  return out;
}

Vec<GaussianRational> rho_inverse(const Vec<RationalQuaternion>& x) {
  std::size_t m = x.size();
  Vec<GaussianRational> out(2 * m);
  for (std::size_t l = 0; l < m; ++l) {
    out[l] = x[l].complex_part();
    out[m + l] = x[l].j_part();
  }
  return out;
}

RationalQuaternion quaternionic_form(const StructuredSpace& space,
                                     const Vec<GaussianRational>& u,
                                     const Vec<GaussianRational>& v) {
  if (!space.form) {
    fail(ErrorName::WrongFamily, "no form to quaternionify");
  }
  if (!space.sigma || space.sigma->sign != -1) {
    fail(ErrorName::WrongFamily, "quaternionic form needs sigma_minus");
  }
  GaussianRational a = evaluate_form(*space.form, u, v);
  GaussianRational b =
      evaluate_form(*space.form, u, apply_sigma(*space.sigma, v));
  return {a, b};
}

RationalQuaternion evaluate_qform(const Mat<RationalQuaternion>& gram,
                                  const Vec<RationalQuaternion>& x,
                                  const Vec<RationalQuaternion>& y) {
  if (gram.rows() != x.size() || gram.cols() != y.size()) {
    fail(ErrorName::DimensionMismatch, "qform evaluation shape");
  }
  RationalQuaternion acc;
  for (std::size_t l = 0; l < x.size(); ++l) {
    for (std::size_t k = 0; k < y.size(); ++k) {
      if (gram.at(l, k).is_zero()) continue;
      acc += x[l] * gram.at(l, k) * y[k].anti_involution();
    }
  }
  return acc;
}

namespace {

// Greedy quaternionic basis: standard vectors outside the running
// C-span of {b, sigma(b)}.  Always completes: v and sigma(v) are
// C-independent when sigma^2 = -id, and any proper subspace misses
// some standard vector.
std::vector<Vec<GaussianRational>> quaternionic_basis(
    const StructuredSpace& space) {
  std::size_t n = space.dim;
  std::size_t m = n / 2;
  Mat<GaussianRational> span(n, 0);
  std::vector<Vec<GaussianRational>> basis;
  std::size_t current_rank = 0;
  for (std::size_t i = 0; i < n && basis.size() < m; ++i) {
    Vec<GaussianRational> e(n);
    e[i] = GaussianRational(1);
    Mat<GaussianRational> probe = hcat(span, col_matrix(e));
    if (rank(probe) == current_rank) continue;
    span = hcat(probe, col_matrix(apply_sigma(*space.sigma, e)));
    current_rank = rank(span);
    basis.push_back(std::move(e));
  }
  if (basis.size() != m) {
    fail(ErrorName::ConditionViolated, "quaternionic basis incomplete");
  }
  return basis;
}

}  // namespace

QuaternionicSpace quaternionify(const StructuredSpace& space) {
  switch (space.family) {
    case Family::GlSigmaMinus:
    case Family::OSigmaMinus:
    case Family::SpSigmaMinus:
      break;
    default:
      fail(ErrorName::WrongFamily,
           "quaternionify needs a sigma_minus family, got " +
               std::string(family_token(space.family)));
  }
  if (space.dim % 2 != 0) {
    fail(ErrorName::BadParity, "sigma_minus space must be even-dimensional");
  }
  if (!space.sigma || space.sigma->sign != -1) {
    fail(ErrorName::WrongFamily, "quaternionify needs sigma_minus");
  }

  QuaternionicSpace out;
  out.qdim = space.dim / 2;
  if (!space.form) {
    return out;
  }

  out.parity = space.form->kind == FormKind::Alternating
                   ? HamiltonianParity::Alternating
                   : HamiltonianParity::Symmetric;

  std::vector<Vec<GaussianRational>> basis = quaternionic_basis(space);
  Mat<RationalQuaternion> gram(out.qdim, out.qdim);
  for (std::size_t l = 0; l < out.qdim; ++l) {
    for (std::size_t k = 0; k < out.qdim; ++k) {
      gram.at(l, k) = quaternionic_form(space, basis[l], basis[k]);
    }
  }

  int s = out.parity == HamiltonianParity::Symmetric ? 1 : -1;
  for (std::size_t l = 0; l < out.qdim; ++l) {
    for (std::size_t k = 0; k < out.qdim; ++k) {
      RationalQuaternion flipped = gram.at(l, k).anti_involution();
      if (s < 0) flipped = -flipped;
      if (gram.at(k, l) != flipped) {
        fail(ErrorName::ConditionViolated, "hamiltonian parity law failed");
      }
    }
  }
  out.qform = std::move(gram);
  return out;
}

}  // namespace orbitforge
