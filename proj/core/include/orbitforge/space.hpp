#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orbitforge/inertia.hpp"
#include "orbitforge/matrix.hpp"

namespace orbitforge {

enum class Family {
  GlSigmaPlus,
  GlSigmaMinus,
  GlTauStar,
  OSigmaPlus,
  OSigmaMinus,
  SpSigmaPlus,
  SpSigmaMinus,
};

inline constexpr Family kAllFamilies[] = {
    Family::GlSigmaPlus, Family::GlSigmaMinus, Family::GlTauStar,  Family::OSigmaPlus,
    Family::OSigmaMinus, Family::SpSigmaPlus,  Family::SpSigmaMinus,
};

std::string_view family_token(Family f);   // e.g. "o_sigma_plus"
std::string_view family_prefix(Family f);  // e.g. "o+"
Family family_from_token(std::string_view token);
Family family_from_prefix(std::string_view prefix);

enum class FormKind { Symmetric, Alternating, Hermitian };

std::string_view form_kind_token(FormKind k);
FormKind form_kind_from_token(std::string_view token);

bool family_has_form(Family f);
FormKind family_form_kind(Family f);
// +1, -1, or absent (gl_tau_star).
std::optional<int> family_sigma_sign(Family f);

// Evaluation conventions, fixed once for the whole tree:
//   bilinear   tau(u, v)  = v^T T u
//   hermitian  tau*(u, v) = conj(u)^T T v
struct Form {
  Mat<GaussianRational> t;
  FormKind kind;
};

GaussianRational evaluate_form(const Form& f, const Vec<GaussianRational>& u,
                               const Vec<GaussianRational>& v);

// Anti-linear map v -> s * conj(v); sign = the value of sigma^2.
struct AntiLinearMap {
  Mat<GaussianRational> s;
  int sign;
};

Vec<GaussianRational> apply_sigma(const AntiLinearMap& m, const Vec<GaussianRational>& v);

struct StructuredSpace {
  std::size_t dim = 0;
  Family family = Family::GlSigmaPlus;
  std::optional<Form> form;
  std::optional<AntiLinearMap> sigma;
};

struct CheckReport {
  bool ok = true;
  std::vector<std::string> failures;

  void require(bool cond, std::string what) {
    if (!cond) {
      ok = false;
      failures.push_back(std::move(what));
    }
  }
  std::string joined() const;
};

// Appendix-style standard models.  p is the signature parameter where the
// family has one (gl_tau_star, o_sigma_plus, sp_sigma_minus), ignored else.
StructuredSpace standard_space(Family f, std::size_t n, std::size_t p = 0);
AntiLinearMap standard_sigma(Family f, std::size_t n, std::size_t p = 0);

// sigma^2 = sign id, family shape constraints, nondegeneracy, and the
// compatibility law tau(sigma u, sigma v) = conj(tau(u, v)).
CheckReport check_compatibility(const StructuredSpace& space);

CheckReport group_membership(const StructuredSpace& space, const Mat<GaussianRational>& g);
CheckReport algebra_membership(const StructuredSpace& space, const Mat<GaussianRational>& x);
CheckReport isotropy_group_membership(const StructuredSpace& space, const Mat<GaussianRational>& g,
                                      const Vec<GaussianRational>& v0);
// Throws NotSpecial when v0 is not a special vector.
CheckReport isotropy_membership(const StructuredSpace& space, const Mat<GaussianRational>& x,
                                const Vec<GaussianRational>& v0);

struct SpecialReport {
  bool special = false;
  // +-1 for sigma_+ (anti-linear eigenvalue), +-i for sigma_- (eigenvalue of
  // the linear map v -> S v); absent when the family has no sigma.
  std::optional<GaussianRational> sigma_eigenvalue;
  bool isotropic = true;
  std::vector<std::string> failures;
};

SpecialReport is_special_vector(const StructuredSpace& space, const Vec<GaussianRational>& v);

// One eigensector of special vectors.  For sigma_+ the sector
// {v : sigma v = s v} is a real form: real_coefficients is true and the span
// is over real combinations of the columns.  For sigma_- the sector is the
// complex eigenspace ker(S -+ i).  Families without sigma get the whole space
// as a single complex sector.
struct SectorBasis {
  Mat<GaussianRational> basis;
  bool real_coefficients = false;
  std::optional<GaussianRational> eigenvalue;
};

// Sectors in the fixed search order +1, -1 (sigma_+) or +i, -i (sigma_-).
std::vector<SectorBasis> sector_bases(const StructuredSpace& space);

// Signature parameter p recovered from the structure matrices: inertia of the
// hermitian pairing tau(sigma u, v) for o_sigma_plus / sp_sigma_minus, of T
// itself for gl_tau_star; not defined for the other families.
std::optional<std::size_t> signature_param(const StructuredSpace& space);

// Real solutions of A x = b over the rationals, treating the complex system
// as its real and imaginary parts; free variables zeroed.
std::optional<Vec<Rational>> solve_real(const Mat<GaussianRational>& a,
                                        const Vec<GaussianRational>& b);

Mat<Rational> realify_columns(const Mat<GaussianRational>& a);

}  // namespace orbitforge
