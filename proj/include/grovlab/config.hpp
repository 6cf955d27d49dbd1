#pragma once

namespace grovlab {

#ifndef GROVLAB_VERSION
#define GROVLAB_VERSION "0.1.0"
#endif

inline constexpr const char* version() { return GROVLAB_VERSION; }

// All numeric tolerances in one place. Algebraic identities (norms,
// unitarity, Hermiticity, trace preservation) use `algebra`; the looser
// knobs belong to the iterative optimizers and the protocol checks.
struct Tolerances {
  double algebra = 1e-12;        // exact linear-algebra identities
  double psd = 1e-10;            // eigenvalue floor for density matrices
  double feasibility = 1e-10;    // |rho_B - I/2| bound for perfect teleportation
  double gram = 1e-10;           // off-diagonal bound in superdense Gram matrix
  double method_agreement = 1e-8;// cross-method P_max agreement
  double stationarity = 1e-10;   // Lagrange-equation residuals
  double conjecture = 1e-6;      // |P_max - 1/2| window in conjecture scans
  double singular_band = 1e-10;  // |alpha^2 - (beta^2+gamma^2)| on-circle band
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace grovlab
