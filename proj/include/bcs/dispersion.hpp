#pragma once

#include <cmath>

#include "bcs/quadrature.hpp"

namespace bcs {

// Temperature / chemical potential pair, k_B = 1.
struct ThermoPoint {
  double T = 0.0;
  double mu = 0.0;

  double beta() const { return T > 0.0 ? 1.0 / T : std::numeric_limits<double>::infinity(); }
  bool valid() const { return std::isfinite(mu) && std::isfinite(T) && T >= 0.0; }
};

// xi(p) = p^2 - mu, computed with one rounding so the cancellation at the
// Fermi surface does not pollute 1/K_T integrals at small T.
inline double xi_p(double p, double mu) { return std::fma(p, p, -mu); }

// K_T(p) = (p^2-mu)/tanh((p^2-mu)/(2T)); 2T at p^2 = mu; |p^2-mu| at T = 0.
double k_T(double p, const ThermoPoint& pt);

// E_Delta(p) = sqrt((p^2-mu)^2 + delta^2).
double e_delta(double p, double delta, const ThermoPoint& pt);

// K_T^Delta(p) = E_Delta(p)/tanh(E_Delta(p)/(2T)); E_Delta at T = 0.
double k_T_delta(double p, double delta, const ThermoPoint& pt);

// variants taking xi = p^2 - mu directly (grids precompute xi via xi_p)
double k_T_xi(double xi, double T);
double k_T_delta_xi(double xi, double delta, double T);

// m_mu(T) = (1/4pi) int (1/K_T - 1/p^2) d^3p = int_0^inf (p^2/K_T - 1) dp,
// evaluated on a Fermi-adapted grid with an analytic tail.  Requires
// mu > 0, T > 0.  As T -> 0:
//   m_mu(T) = sqrt(mu) (ln(mu/T) + gamma - 2 + ln(8/pi) + o(1)).
double m_mu(const ThermoPoint& pt);

// same integral in the (2pi)^-3 convention of the low-density analysis
inline double m_mu_lowdensity(const ThermoPoint& pt) {
  return m_mu(pt) / (2.0 * M_PI * M_PI);
}

// g_1(z) = (e^{2z} - 2z e^z - 1)/(z^2 (1+e^z)^2)        (odd)
// g_2(z) = 2 e^z (e^z - 1)/(z (e^z+1)^3)                (even)
// g1_over_z(z) = g_1(z)/z > 0 for all z; g1_over_z(0) = 1/12, g_2(0) = 1/4.
double g1(double z);
double g2(double z);
double g1_over_z(double z);

inline constexpr double kEulerGamma = 0.57721566490153286061;

}  // namespace bcs
