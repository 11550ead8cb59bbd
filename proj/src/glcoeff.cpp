#include "bcs/glcoeff.hpp"

#include <cmath>

#include "bcs/dispersion.hpp"
#include "bcs/errors.hpp"

namespace bcs {

namespace {

double sech2_half(double z) {
  // sech^2(z/2) = 4 e^{-|z|} / (1 + e^{-|z|})^2
  const double em = std::exp(-std::abs(z));
  const double c = 1.0 + em;
  return 4.0 * em / (c * c);
}

}  // namespace

double GLCoefficients::kappa(double D) const {
  if (!(D > 0.0)) throw DomainError("GLCoefficients::kappa: requires D > 0");
  return std::sqrt(lambda2 * D);
}

TProfileResult t_profile(const RadialPotential& V, const Eigen::VectorXd& alpha0_hat,
                         double tc, double mu, const RadialGrid& grid,
                         double route_tol) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (alpha0_hat.size() != n)
    throw std::invalid_argument("t_profile: alpha0 / grid size mismatch");
  if (!(tc > 0.0)) throw std::invalid_argument("t_profile: tc <= 0");

  Eigen::VectorXd t_from_k(n), wa(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t_from_k[i] = 2.0 * k_T_xi(xi_p(grid.nodes[i], mu), tc) * alpha0_hat[i];
    wa[i] = grid.weights[i] * grid.nodes[i] * grid.nodes[i] * alpha0_hat[i];
  }
  const Eigen::MatrixXd K = channel_kernel(V, 0, grid).matrix;
  const Eigen::VectorXd t_from_v = -2.0 * (K * wa);

  const double scale = t_from_k.cwiseAbs().maxCoeff();
  const double diff = (t_from_k - t_from_v).cwiseAbs().maxCoeff();
  TProfileResult out;
  out.route_max_rel_diff = scale > 0.0 ? diff / scale : 0.0;
  if (out.route_max_rel_diff > route_tol)
    throw AccuracyError(
        "t_profile: 2 K_T alpha0 and -2 V alpha0 disagree; alpha0 is not a zero mode "
        "of K_{T_c} + V at this accuracy",
        out.route_max_rel_diff);
  out.t = t_from_k;
  return out;
}

GLCoefficients compute_coefficients(const RadialPotential& V, double mu, double tc,
                                    const Eigen::VectorXd& t, const RadialGrid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (t.size() != n) throw std::invalid_argument("compute_coefficients: size mismatch");
  if (!(tc > 0.0)) throw std::invalid_argument("compute_coefficients: tc <= 0");
  const double beta = 1.0 / tc;

  double I_g1 = 0.0, I_g2q2 = 0.0, I_sech = 0.0, I_quart = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double q = grid.nodes[i];
    const double meas = grid.weights[i] * q * q / (2.0 * M_PI * M_PI);
    const double xi = xi_p(q, mu);
    const double z = beta * xi;
    const double t2 = t[i] * t[i];
    I_g1 += meas * t2 * g1(z);
    I_g2q2 += meas * t2 * beta * q * q * g2(z);
    I_sech += meas * t2 * sech2_half(z);
    I_quart += meas * t2 * t2 * beta * g1_over_z(z);
  }

  GLCoefficients c;
  c.tc = tc;
  c.mu = mu;
  c.t_profile = t;
  c.grid = std::make_shared<RadialGrid>(grid);
  c.lambda0 = (I_g1 + (2.0 / 3.0) * I_g2q2) / (16.0 * tc * tc);
  if (!(c.lambda0 > 0.0))
    throw NumericsError("compute_coefficients: lambda0 <= 0");
  c.lambda1 = I_g1 / (4.0 * tc * tc) / c.lambda0;
  c.lambda2 = I_sech / (8.0 * tc) / c.lambda0;
  c.lambda3 = I_quart / (16.0 * tc * tc) / c.lambda0;
  if (!(c.lambda2 > 0.0) || !(c.lambda3 > 0.0) || !std::isfinite(c.lambda1))
    throw NumericsError("compute_coefficients: coefficient signs/finiteness violated");
  (void)V;
  return c;
}

GLCoefficients gl_coefficients(const RadialPotential& V, double mu, TcOptions opts) {
  // the zero-mode route needs T_c a little tighter than the default so the
  // two t-routes agree to 1e-6
  opts.rel_tol = std::min(opts.rel_tol, 1e-7);
  TcReport rep = critical_temperature(V, mu, opts);
  if (!(rep.tc > 0.0)) throw DomainError("gl_coefficients: T_c = 0");
  if (rep.channel != 0)
    throw DomainError("gl_coefficients: minimizing channel is not l = 0 "
                      "(non-degenerate radial ground state required)");
  const double cutoff =
      opts.grid.cutoff > 0.0
          ? opts.grid.cutoff
          : 20.0 * std::max({std::sqrt(std::max(mu, 0.0)), 1.0, 1.0 / V.range()});
  RadialGrid grid = build_fermi_adapted_grid(mu, cutoff, rep.tc,
                                             opts.grid.panels_per_decade,
                                             opts.grid.points_per_panel);
  ChannelOperator op = make_channel_operator(V, 0, {rep.tc, mu}, grid);
  const Eigen::VectorXd alpha0 = op.alpha_hat();
  TProfileResult t = t_profile(V, alpha0, rep.tc, mu, grid);
  GLCoefficients c = compute_coefficients(V, mu, rep.tc, t.t, grid);
  c.alpha0_norm_convention = 1.0;
  return c;
}

}  // namespace bcs
