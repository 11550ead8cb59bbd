#pragma once

#include "bcs/potential.hpp"

namespace bcs {

// Scattering length of 2V in the pair-dispersion convention: the zero-energy
// problem (2p^2 + 2V) psi = 0, i.e. the radial equation u'' = V u.  The
// resolvent route evaluates
//   a = (1/4pi) < |V|^{1/2} | (1 + V^{1/2} p^{-2} |V|^{1/2})^{-1} | V^{1/2} >,
// V^{1/2} = sgn(V)|V|^{1/2}, whose s-wave kernel in the reduced radial
// representation is V^{1/2}(r) min(r,r') |V|^{1/2}(r').
struct ScatteringReport {
  enum class Method { resolvent, ode_oracle };
  double a = 0.0;
  double bs_spectrum_floor = 0.0;  // lowest eigenvalue of V^{1/2} p^{-2} |V|^{1/2}
  Method method = Method::resolvent;
  bool bound_state_free = false;   // floor > -1
};

// resolvent formula; throws DomainError when the spectrum floor reaches -1
// (zero-energy resonance/bound state, a infinite or formula inapplicable)
ScatteringReport scattering_length(const RadialPotential& V);

// companion oracle: integrate u'' = V u outward from u(0) = 0, u'(0) = 1 and
// read the intercept a = r - u/u' beyond the support of V
double scattering_length_ode(const RadialPotential& V);

}  // namespace bcs
