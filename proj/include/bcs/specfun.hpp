#pragma once

#include <span>
#include <vector>

namespace bcs {

// Spherical Bessel function j_l(x), x >= 0, l >= 0.  Series for small x,
// recurrence in the oscillatory regime, Miller's downward recurrence with
// sum-rule normalization otherwise.  Good to ~1e-13 relative for
// x <= 1e4, l <= 64 (away from zeros of j_l).
double spherical_bessel_j(int ell, double x);

// j_0(x) .. j_lmax(x) in one sweep.
std::vector<double> spherical_bessel_j_array(int lmax, double x);

// Legendre polynomial P_l(u), |u| <= 1, by the three-term recurrence.
double legendre_p(int ell, double u);

// Default truncation of l-series (sum rules, kernel traces).
inline constexpr int kDefaultEllMax = 40;

}  // namespace bcs
