#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bcs/dispersion.hpp"
#include "bcs/potential.hpp"
#include "bcs/quadrature.hpp"

namespace bcs {

// Symmetric Birman-Schwinger discretization in one angular channel,
//   A_ij = sqrt(w_i p_i^2) K_T(p_i)^{-1/2} K_l(p_i,p_j) K_T(p_j)^{-1/2} sqrt(w_j p_j^2),
// isospectral to the l-sector of K_T^{-1/2} V K_T^{-1/2}.  At T = T_c its
// lowest eigenvalue equals -1.
struct ChannelOperator {
  int ell = 0;
  ThermoPoint pt;
  RadialGrid grid;
  Eigen::MatrixXd matrix;
  double lowest_eigenvalue = 0.0;
  Eigen::VectorXd lowest_eigenvector;  // weighted representation, unit norm

  // alpha_hat(p_i) of the zero mode of K_T + V recovered from the eigenvector
  Eigen::VectorXd alpha_hat() const;
};

ChannelOperator make_channel_operator(const RadialPotential& V, int ell,
                                      const ThermoPoint& pt, const RadialGrid& grid);

double bs_lowest_eigenvalue(const RadialPotential& V, int ell, const ThermoPoint& pt,
                            const RadialGrid& grid);

struct TcOptions {
  int lmax = 8;
  double rel_tol = 1e-6;      // bisection tolerance on T_c
  double t_floor = -1.0;      // default 1e-12 * max(mu, 1)
  double t_ceiling = -1.0;    // default 100 * max(mu, 1)
  double degeneracy_tol = 1e-8;
  GridOptions grid{3, 12, -1.0};
};

struct TcReport {
  double tc = 0.0;
  int channel = -1;  // minimizing l, -1 when tc = 0
  std::pair<double, double> bracket{0.0, 0.0};
  std::vector<std::pair<double, double>> eigen_trace;  // (T, lowest eig) of the winner
  bool degenerate = false;
  std::vector<double> channel_tc;  // per-l; 0 when the channel has no crossing
};

// T_c from infspec(K_{T_c} + V) = 0 via BS bisection; any coupling is folded
// into V beforehand (V.scaled(lambda)).  T_c = max over channels l <= lmax.
TcReport critical_temperature(const RadialPotential& V, double mu,
                              const TcOptions& opts = {});

// sphere-operator eigenvalue e_l = K_l(sqrt(mu), sqrt(mu))
//                                = (1/2pi^2) int V(x) |j_l(sqrt(mu)|x|)|^2 dx
double e_channel(const RadialPotential& V, int ell, double mu);

struct WOptions {
  std::vector<double> t_ladder{1e-6, 1e-7, 1e-8};  // in units of mu
  double drift_tol = 1e-2;  // relative drift across the ladder before erroring
  GridOptions grid{5, 16, -1.0};
};

// second-order channel coefficient
//   w_l = lim_{T->0} [ int_0^inf p^2 B_l(p)^2/K_T(p) dp - m_mu(T) e_l^2 ],
// B_l(p) = K_l(p, sqrt(mu)); the log divergences cancel by the m_mu
// normalization.  Aitken-extrapolated over the T-ladder.
double w_channel(const RadialPotential& V, int ell, double mu, const WOptions& opts = {});

struct BmuResult {
  double value = 0.0;
  int ell = 0;
  // set when the minimizer of lambda e - lambda^2 w differs from the
  // minimizer of e alone
  std::optional<int> e_min_ell;
};

// b_mu(lambda) = min_l (lambda e_l - lambda^2 w_l)
BmuResult b_mu(const RadialPotential& V, double mu, double lambda, int lmax = 8,
               const WOptions& wopts = {});

// T_c = mu (8/pi) e^{gamma-2} exp(1/(sqrt(mu) b_mu(lambda)));  b_mu >= 0 -> DomainError
double tc_weak_coupling_formula(const RadialPotential& V, double mu, double lambda,
                                int lmax = 8, const WOptions& wopts = {});

// T_c = mu (8/pi) e^{gamma-2} exp(pi/(2 sqrt(mu) a)), a < 0
double tc_low_density_formula(double a, double mu);

// zero-range gap equation for numbers,
//   -1/(4pi a) = (2pi)^{-3} int (tanh(E/2T)/E - 1/p^2) dp,  E = sqrt((p^2-mu)^2+Delta^2):
// tc_zero_range solves the Delta = 0 equation for T; gap_zero_range solves for
// the constant Delta >= 0 at fixed T (0 for T >= T_c).  Both require a < 0.
double tc_zero_range(double a, double mu);
double gap_zero_range(double a, double mu, double T);

struct UniversalRatioSample {
  double lambda = 0.0;
  double tc = 0.0;
  double xi = 0.0;
  double ratio = 0.0;
};

// (lambda, Xi/T_c) table approaching pi/e^gamma ~ 1.7639 for V with
// non-positive Fourier transform
std::vector<UniversalRatioSample> universal_ratio(const RadialPotential& V, double mu,
                                                  std::span<const double> lambdas,
                                                  const TcOptions& opts = {});

inline constexpr double kTcPrefactor = 0.61380826028655620;  // (8/pi) e^{gamma-2}
inline constexpr double kUniversalRatio = 1.7638769888620457;  // pi e^{-gamma}

}  // namespace bcs
