#pragma once

#include <cstddef>
#include <optional>

#include <orbitforge/quaternion.hpp>
#include <orbitforge/space.hpp>

namespace orbitforge {

enum class HamiltonianParity { Symmetric, Alternating };

// A sigma_minus space viewed as a left module over the quaternions,
// with scalar action (a + b j) . v = a v + b sigma(v).  qform is the
// Gram matrix of tau_minus(u, v) = tau(u, v) + tau(u, sigma(v)) j over a
// quaternionic basis; it satisfies the hamiltonian law of its parity:
// symmetric   tau_minus(v, u) =  tau_minus(u, v)^q
// alternating tau_minus(v, u) = -tau_minus(u, v)^q
struct QuaternionicSpace {
  std::size_t qdim = 0;
  std::optional<Mat<RationalQuaternion>> qform;
  HamiltonianParity parity = HamiltonianParity::Symmetric;
};

// Left scalar action of q = a + b j on v: a v + b sigma(v).
Vec<GaussianRational> quaternion_scale(const RationalQuaternion& q,
                                       const Vec<GaussianRational>& v,
                                       const AntiLinearMap& sigma);

// rho: C^m x C^m -> H^m, (z, w) |-> z + w j.  An isomorphism of
// quaternionic vector spaces when sigma maps e_l to e_{m+l}, i.e. for
// the block map (z, w) |-> (-conj(w), conj(z)).
Vec<RationalQuaternion> rho(const Vec<GaussianRational>& v);
Vec<GaussianRational> rho_inverse(const Vec<RationalQuaternion>& x);

// tau_minus(u, v) = tau(u, v) + tau(u, sigma(v)) j on the complex space.
RationalQuaternion quaternionic_form(const StructuredSpace& space,
                                     const Vec<GaussianRational>& u,
                                     const Vec<GaussianRational>& v);

// Gram evaluation with left-linear first slot and ^q-twisted second:
// sum_{l,k} x_l G_{lk} (y_k)^q.
RationalQuaternion evaluate_qform(const Mat<RationalQuaternion>& gram,
                                  const Vec<RationalQuaternion>& x,
                                  const Vec<RationalQuaternion>& y);

// Transports a sigma_minus space to a quaternionic one.  The Gram is
// taken over the quaternionic basis found by greedily picking standard
// basis vectors outside the running H-span; for the standard models this
// is e_1..e_m and yields I_m (o families) and -j I_{m-p,p} (sp families).
QuaternionicSpace quaternionify(const StructuredSpace& space);

}  // namespace orbitforge
