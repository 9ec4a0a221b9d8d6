#pragma once

// One entry point for a map germ: the corank-one criteria first, then the
// frontal criteria when the former have nothing definite to say.

#include <string>

#include "singcrit/frontal.hpp"

namespace singcrit {

namespace detail {

inline void merge_phi_diagnostics(Diagnostics& into, const Diagnostics& phi) {
  if (phi.corank) into.corank = phi.corank;
  if (phi.phi_gradient) into.phi_gradient = phi.phi_gradient;
  if (phi.hess_det) into.hess_det = phi.hess_det;
  if (phi.indep_test) into.indep_test = phi.indep_test;
}

}  // namespace detail

/// The two families are disjoint: cross caps and S1 germs are not frontals,
/// and frontal singular points have a critical phi with vanishing Hessian.
inline Classification classify_germ(const FrontalGerm& g, const FrontalOptions& opts = {}) {
  const Classification phi = classify_corank1(g.map, opts.tol);
  if (phi.definite()) return phi;
  if (phi.diagnostics.corank && *phi.diagnostics.corank == 2) return phi;

  Classification frontal = classify_frontal(g, opts);
  detail::merge_phi_diagnostics(frontal.diagnostics, phi.diagnostics);
  if (frontal.definite()) return frontal;

  Classification out = Classification::unrecognized("phi: " + phi.reasons.front(), frontal.diagnostics);
  for (const std::string& r : frontal.reasons) out.reasons.push_back("frontal: " + r);
  return out;
}

}  // namespace singcrit
