#pragma once

#include <Eigen/Dense>
#include <memory>

#include "bcs/potential.hpp"
#include "bcs/quadrature.hpp"
#include "bcs/tcrit.hpp"

namespace bcs {

// Ginzburg-Landau coefficients extracted from the zero mode alpha0 of
// K_{T_c} + V.  With t(q) the Fourier transform of 2 K_{T_c} alpha0 and
// beta_c = 1/T_c, the radial integrals (measure q^2 dq / 2pi^2) are
//   lambda0 = 1/(16 T_c^2) int t^2 [ g1(b xi) + (2/3) b q^2 g2(b xi) ]
//   lambda1 = lambda0^{-1} 1/(4 T_c^2)  int t^2 g1(b xi)
//   lambda2 = lambda0^{-1} 1/(8 T_c)    int t^2 sech^2(b xi / 2)
//   lambda3 = lambda0^{-1} b/(16 T_c^2) int t^4 g1(b xi)/(b xi)
// with xi = q^2 - mu; the lambda3 integrand goes through g1_over_z so the
// removable singularity at the Fermi surface never forms.
struct GLCoefficients {
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  double tc = 0.0;
  double mu = 0.0;
  Eigen::VectorXd t_profile;
  std::shared_ptr<const RadialGrid> grid;
  double alpha0_norm_convention = 1.0;  // ||alpha0||_{L^2(p^2 dp)} used

  // kappa of the (kappa^2/2)(1-|psi|^2)^2 form, D > 0
  double kappa(double D) const;
};

struct TProfileResult {
  Eigen::VectorXd t;
  double route_max_rel_diff = 0.0;  // 2 K_T alpha0 vs -2 (V alpha0)_channel
};

// t(q) computed both ways and certified equal to route_tol
TProfileResult t_profile(const RadialPotential& V, const Eigen::VectorXd& alpha0_hat,
                         double tc, double mu, const RadialGrid& grid,
                         double route_tol = 1e-6);

GLCoefficients compute_coefficients(const RadialPotential& V, double mu, double tc,
                                    const Eigen::VectorXd& t, const RadialGrid& grid);

// pipeline: T_c (l = 0) -> zero mode -> t -> coefficients
GLCoefficients gl_coefficients(const RadialPotential& V, double mu,
                               TcOptions opts = {});

}  // namespace bcs
