#include "bcs/dispersion.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bcs/errors.hpp"

namespace bcs {

double k_T_xi(double xi, double T) {
  if (T == 0.0) return std::abs(xi);
  const double w = xi / (2.0 * T);
  if (std::abs(w) < 1e-6) {
    // z/tanh(z/2T) = 2T (1 + w^2/3 - w^4/45 + ...)
    const double w2 = w * w;
    return 2.0 * T * (1.0 + w2 / 3.0 - w2 * w2 / 45.0);
  }
  return xi / std::tanh(w);
}

double k_T(double p, const ThermoPoint& pt) {
  if (!pt.valid()) throw std::invalid_argument("k_T: invalid ThermoPoint");
  return k_T_xi(xi_p(p, pt.mu), pt.T);
}

double e_delta(double p, double delta, const ThermoPoint& pt) {
  return std::hypot(xi_p(p, pt.mu), delta);
}

double k_T_delta_xi(double xi, double delta, double T) {
  return k_T_xi(std::hypot(xi, delta), T);
}

double k_T_delta(double p, double delta, const ThermoPoint& pt) {
  return k_T_delta_xi(xi_p(p, pt.mu), delta, pt.T);
}

double m_mu(const ThermoPoint& pt) {
  if (!(pt.mu > 0.0) || !(pt.T > 0.0))
    throw std::invalid_argument("m_mu: requires mu > 0, T > 0");
  const double mu = pt.mu, T = pt.T;
  const double pf = std::sqrt(mu);
  // cutoff where tanh is saturated: (L^2-mu)/(2T) > 50, plus margin
  const double L = std::sqrt(mu + std::max(120.0 * T, 900.0 * mu));
  RadialGrid grid = build_fermi_adapted_grid(mu, L, T, 6, 20);
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p = grid.nodes[i];
    const double xi = xi_p(p, mu);
    s += grid.weights[i] * (p * p / k_T_xi(xi, T) - 1.0);
  }
  // beyond L: K_T = p^2 - mu to machine precision, so
  // int_L^inf mu/(p^2-mu) dp = (sqrt(mu)/2) ln((L+pf)/(L-pf))
  s += 0.5 * pf * std::log((L + pf) / (L - pf));
  return s;
}

namespace {

// sinh(z) - z by Taylor series for small z (the only cancelling piece of g1)
double sinh_minus_z(double z) {
  const double z2 = z * z;
  double term = z * z2 / 6.0, sum = term;
  for (int k = 1; k < 20; ++k) {
    term *= z2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

double g1_over_z(double z) {
  if (!std::isfinite(z)) throw std::invalid_argument("g1_over_z: non-finite z");
  // e^{2z} - 2z e^z - 1 = 2 e^z (sinh z - z); g1 odd, so g1/z is even
  const double az = std::abs(z);
  if (az == 0.0) return 1.0 / 12.0;
  if (az <= 0.5) {
    const double ez = std::exp(az), c = 1.0 + ez;
    return 2.0 * ez * sinh_minus_z(az) / (az * az * az * c * c);
  }
  // scaled by e^{-2z} to avoid overflow: (1 - e^{-2z} - 2z e^{-z})/(z^3 (1+e^{-z})^2)
  const double em = std::exp(-az);
  const double num = 1.0 - em * em - 2.0 * az * em;
  const double den = az * az * az * (1.0 + em) * (1.0 + em);
  return num / den;
}

double g1(double z) { return z * g1_over_z(z); }

double g2(double z) {
  if (!std::isfinite(z)) throw std::invalid_argument("g2: non-finite z");
  const double az = std::abs(z);  // g2 is even
  if (az == 0.0) return 0.25;
  // 2 e^z (e^z-1)/(z (e^z+1)^3) = -2 e^{-z} expm1(-z)/(z (1+e^{-z})^3), no cancellation
  const double em = std::exp(-az);
  const double c = 1.0 + em;
  return -2.0 * em * std::expm1(-az) / (az * c * c * c);
}

}  // namespace bcs
