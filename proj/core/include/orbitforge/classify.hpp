#pragma once

#include <optional>
#include <vector>

#include <orbitforge/decompose.hpp>
#include <orbitforge/jordan.hpp>
#include <orbitforge/triple.hpp>

namespace orbitforge {

// Exact spectral report for the invertible part of a non-nilpotent input.
struct UnclassifiedResidual {
  std::size_t dim = 0;
  Subspace carrier;  // inside the input carrier, in carrier coordinates
  // Jordan data when the characteristic polynomial splits over Q(i).
  std::optional<std::vector<SpectralBlock>> jordan;
  Vec<GaussianRational> char_poly;  // monic, ascending degree
};

struct ClassificationResult {
  DistinguishedLabel core;
  std::vector<TypeLabel> residual_types;  // aggregated, canonical order
  std::optional<UnclassifiedResidual> unclassified_residual;

  // Conjugation in carrier coordinates onto `model`:
  //   witness A witness^{-1} = Y_model     witness v0 = v0_model
  //   S_model conj(witness)  = witness S   tau_model(P u, P v) = tau(u, v)
  Mat<GaussianRational> witness;
  Triple model;

  // sigma-eigenvalue of v0; the model is synthesized in the same gauge,
  // except gl_sigma_minus where both gauges are equivalent and the model
  // always uses +i.
  std::optional<GaussianRational> condition_eigenvalue;
};

ClassificationResult classify(const Triple& t);

// Canonical model: the marked core block in its chain basis followed by the
// residual summands; v0 = Y^h w in the chain basis (scaled by the modulus
// for gl_sigma_plus).  The three-argument form also selects the
// sigma-eigenvalue of the marked vector (+-1 for sigma_+, +-i for sigma_-).
Triple synthesize_distinguished(const DistinguishedLabel& core,
                                const std::vector<TypeLabel>& residual = {});
Triple synthesize_distinguished(const DistinguishedLabel& core,
                                const std::vector<TypeLabel>& residual,
                                const GaussianRational& gauge);

// True when the sigma-eigenvalue of the marked vector is an invariant of
// the row; false when an equivalence can move it (and classification
// normalizes to the positive gauge).
bool gauge_rigid(const DistinguishedLabel& core);

// Label with the modulus replaced by its canonical scale-class
// representative where the row's parameter is only a scale class
// (gl_sigma_plus); other rows are returned unchanged.
DistinguishedLabel canonical_label(DistinguishedLabel label);

}  // namespace orbitforge
