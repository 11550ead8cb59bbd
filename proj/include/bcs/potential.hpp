#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "bcs/quadrature.hpp"

namespace bcs {

enum class PotentialFamily { gaussian, square_well, exponential, tabulated };

// Radial two-body interaction V(r).  Builtin families are parametrized by a
// signed strength v and a positive range:
//   gaussian     V(r) = -v exp(-r^2/(2 s^2))
//   square_well  V(r) = -v for r < R, 0 otherwise
//   exponential  V(r) = -v exp(-r/s)
// so v > 0 is an attractive well of depth v.  A coupling lambda >= 0
// multiplies V uniformly.  r^2 V(r) must be absolutely integrable; for
// tabulated data this is checked at construction.
class RadialPotential {
 public:
  static RadialPotential gaussian(double v, double s);
  static RadialPotential square_well(double v, double R);
  static RadialPotential exponential(double v, double s);
  static RadialPotential tabulated(std::vector<double> r, std::vector<double> v);
  // two-column whitespace-separated text (r, V(r)), '#' comments
  static RadialPotential from_file(const std::string& path);

  PotentialFamily family() const { return family_; }
  double coupling() const { return coupling_; }
  RadialPotential scaled(double lambda) const;

  // V(r), coupling included
  double operator()(double r) const;

  // Vhat(p) = (2pi)^{-3/2} int V(x) e^{-ipx} dx
  //         = (2pi)^{-3/2} 4pi int_0^inf r^2 V(r) j_0(pr) dr
  double fourier_transform(double p) const;
  bool closed_form_ft() const { return family_ != PotentialFamily::tabulated; }

  double r_support() const;    // |r^2 V| negligible beyond this radius
  double osc_scale() const;    // resolution scale of Vhat in k
  double integral_3d() const;  // int_{R^3} V(x) dx

  double strength() const { return v_; }
  double range() const { return s_; }
  // interpolation knots (tabulated family only); quadrature panels align here
  std::vector<double> interior_breakpoints() const;

 private:
  RadialPotential() = default;
  double profile(double r) const;  // V(r)/coupling

  PotentialFamily family_ = PotentialFamily::gaussian;
  double v_ = 0.0;  // signed strength (families)
  double s_ = 1.0;  // range parameter (families)
  double coupling_ = 1.0;
  // tabulated data + monotone cubic Hermite slopes
  std::vector<double> tab_r_, tab_v_, tab_d_;
};

// Momentum kernel of V in the angular-momentum-l sector,
//   K_l(p,q) = (2/pi) int_0^inf r^2 V(r) j_l(pr) j_l(qr) dr
//            = (2pi)^{-1/2} int_{-1}^{1} Vhat(sqrt(p^2+q^2-2pq u)) P_l(u) du.
// At the Fermi point K_l(sqrt(mu),sqrt(mu)) = (1/2pi^2) int V |j_l|^2 dx,
// the sphere-operator eigenvalue e_l.
struct ChannelKernel {
  int ell = 0;
  RadialGrid grid;
  Eigen::MatrixXd matrix;  // K_l(p_i, p_j), symmetric
};

ChannelKernel channel_kernel_position(const RadialPotential& V, int ell,
                                      const RadialGrid& grid);
ChannelKernel channel_kernel_momentum(const RadialPotential& V, int ell,
                                      const RadialGrid& grid);
// route picked per family (compact support -> position, else momentum)
ChannelKernel channel_kernel(const RadialPotential& V, int ell, const RadialGrid& grid);

double kernel_value_position(const RadialPotential& V, int ell, double p, double q);
double kernel_value_momentum(const RadialPotential& V, int ell, double p, double q);
double kernel_value(const RadialPotential& V, int ell, double p, double q);

// e^{-x} i_l(x) for x >= 0 (scaled modified spherical Bessel, first kind)
double modified_bessel_i_scaled(int ell, double x);

}  // namespace bcs
