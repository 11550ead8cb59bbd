#pragma once

#include <Eigen/Dense>
#include <memory>

#include "bcs/dispersion.hpp"
#include "bcs/potential.hpp"
#include "bcs/quadrature.hpp"

namespace bcs {

struct SolverOptions {
  double eta = 0.5;                // damping of the fixed-point update
  int max_iter = 2000;
  double tol = 1e-11;              // sup-norm gap defect relative to ||Delta||
  double initial_amplitude = -1.0; // auto: 0.1 * max(T, 0.01 |mu|)
  double triviality_floor = 1e-12; // times the initial amplitude
  bool amplitude_refine = true;    // fix shape, solve the scalar amplitude equation
  GridOptions grid{4, 14, -1.0};
};

// Solution of the channel-reduced BCS gap equation
//   Delta(p) = -int_0^inf q^2 K_l(p,q) Delta(q)/K_T^Delta(q) dq
// with gamma_hat = 1/2 - (p^2-mu)/(2 K_T^Delta), alpha_hat = Delta/(2 K_T^Delta).
struct GapSolution {
  std::shared_ptr<const RadialGrid> grid;
  int ell = 0;
  ThermoPoint pt;
  Eigen::VectorXd delta;
  Eigen::VectorXd alpha_hat;
  Eigen::VectorXd gamma_hat;
  double free_energy_density = 0.0;
  double normal_free_energy_density = 0.0;
  double residual = 0.0;  // sup-norm of the discrete gap-equation defect
  int iterations = 0;
  bool converged = false;

  bool trivial() const { return delta.size() == 0 || delta.cwiseAbs().maxCoeff() == 0.0; }
};

GapSolution solve_gap(const RadialPotential& V, int ell, const ThermoPoint& pt,
                      const SolverOptions& opts = {});

// T = 0: Delta(p) = -int q^2 K_l(p,q) Delta(q)/E_Delta(q) dq, gamma_hat by the
// two-branch formula split at p^2 = mu; free energy from the zero-temperature
// functional (normal-state value subtracted, so the normal state is 0).
GapSolution solve_gap_T0(const RadialPotential& V, int ell, double mu,
                         const SolverOptions& opts = {});

// stored translation-invariant free energy per unit volume
double free_energy(const GapSolution& sol);

// energy gap  Xi = inf_p E_Delta(p)  with parabolic refinement of the
// minimizing node (T = 0 solutions)
double energy_gap(const GapSolution& sol);

// || K_T^Delta alpha + (V alpha)_channel ||_2 / ||alpha||_2 on the grid
double verify_gap_residual(const GapSolution& sol, const RadialPotential& V);

// lowest eigenvalue of the discretized K_T^{Delta} + V in the solution's
// channel, plus the overlap of its eigenvector with alpha_hat
struct TranslationCheck {
  double lowest_eigenvalue = 0.0;
  double alpha_overlap = 0.0;
};
TranslationCheck check_translation_invariance_condition(const GapSolution& sol,
                                                        const RadialPotential& V);

}  // namespace bcs
