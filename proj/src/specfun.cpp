#include "bcs/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace bcs {

namespace {

// j_l(x) = x^l/(2l+1)!! * sum_k (-x^2/2)^k / (k! (2l+3)(2l+5)...(2l+1+2k)).
// Converges everywhere, numerically safe for x^2 <~ 2l+3.
double bessel_series(int ell, double x) {
  double pref = 1.0;
  for (int k = 1; k <= ell; ++k) pref *= x / (2 * k + 1);
  const double x2h = -0.5 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= x2h / (k * (2.0 * ell + 1.0 + 2.0 * k));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return pref * sum;
}

double j0(double x) { return x < 1e-4 ? 1.0 - x * x / 6.0 * (1.0 - x * x / 20.0) : std::sin(x) / x; }
double j1(double x) {
  if (x < 1e-4) return x / 3.0 * (1.0 - x * x / 10.0);
  return std::sin(x) / (x * x) - std::cos(x) / x;
}

// Downward (Miller) recurrence from lstart with sum-rule normalization
// sum_l (2l+1) j_l^2 = 1; fills out[0..lmax].
void bessel_downward(int lmax, double x, std::span<double> out) {
  const int lstart = lmax + 40;
  std::vector<double> f(lstart + 2, 0.0);
  f[lstart + 1] = 0.0;
  f[lstart] = 1e-130;
  for (int k = lstart; k >= 1; --k) {
    f[k - 1] = (2.0 * k + 1.0) / x * f[k] - f[k + 1];
    if (std::abs(f[k - 1]) > 1e130) {
      for (int j = k - 1; j <= lstart + 1; ++j) f[j] *= 1e-130;
    }
  }
  double s = 0.0;
  for (int k = 0; k <= lstart; ++k) s += (2.0 * k + 1.0) * f[k] * f[k];
  double scale = 1.0 / std::sqrt(s);
  // the sum rule fixes |scale|; take the sign from whichever of j0, j1 is
  // farther from a zero
  const double a0 = j0(x), a1 = j1(x);
  if (std::abs(a0) >= std::abs(a1)) {
    if (f[0] * scale * a0 < 0.0) scale = -scale;
  } else {
    if (f[1] * scale * a1 < 0.0) scale = -scale;
  }
  for (int k = 0; k <= lmax; ++k) out[k] = f[k] * scale;
}

}  // namespace

double spherical_bessel_j(int ell, double x) {
  if (ell < 0) throw std::invalid_argument("spherical_bessel_j: ell < 0");
  if (!(x >= 0.0)) throw std::invalid_argument("spherical_bessel_j: x < 0 or NaN");
  if (ell == 0) return j0(x);
  if (ell == 1) return j1(x);
  if (x == 0.0) return 0.0;
  if (x * x < 0.81 * (2.0 * ell + 3.0)) return bessel_series(ell, x);
  if (x >= static_cast<double>(ell)) {
    // oscillatory regime: upward recurrence is stable
    double jm = j0(x), jc = j1(x);
    for (int k = 1; k < ell; ++k) {
      double jn = (2.0 * k + 1.0) / x * jc - jm;
      jm = jc;
      jc = jn;
    }
    return jc;
  }
  std::vector<double> buf(ell + 1);
  bessel_downward(ell, x, buf);
  return buf[ell];
}

std::vector<double> spherical_bessel_j_array(int lmax, double x) {
  if (lmax < 0) throw std::invalid_argument("spherical_bessel_j_array: lmax < 0");
  if (!(x >= 0.0)) throw std::invalid_argument("spherical_bessel_j_array: x < 0 or NaN");
  std::vector<double> out(lmax + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (x >= static_cast<double>(lmax) || lmax <= 1) {
    out[0] = j0(x);
    if (lmax >= 1) out[1] = j1(x);
    for (int k = 2; k <= lmax; ++k)
      out[k] = (2.0 * k - 1.0) / x * out[k - 1] - out[k - 2];
  } else {
    bessel_downward(lmax, x, out);
  }
  return out;
}

double legendre_p(int ell, double u) {
  if (ell < 0) throw std::invalid_argument("legendre_p: ell < 0");
  if (std::abs(u) > 1.0 + 1e-12) throw std::invalid_argument("legendre_p: |u| > 1");
  if (ell == 0) return 1.0;
  double pm = 1.0, pc = u;
  for (int k = 1; k < ell; ++k) {
    double pn = ((2.0 * k + 1.0) * u * pc - k * pm) / (k + 1.0);
    pm = pc;
    pc = pn;
  }
  return pc;
}

}  // namespace bcs
