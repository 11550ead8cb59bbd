#include "bcs/gapsolve.hpp"

#include <cmath>

#include "bcs/errors.hpp"

namespace bcs {

namespace {

// entropy of the 2x2 block with eigenvalues 1/2 +- sqrt((g-1/2)^2 + a^2)
double block_entropy(double g, double a) {
  const double r = std::hypot(g - 0.5, a);
  double lp = std::min(1.0, 0.5 + r), lm = std::max(0.0, 0.5 - r);
  auto xlx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  return -(xlx(lp) + xlx(lm));
}

// -T ln(1 + e^{-xi/T}) without overflow on either side of the Fermi surface
double normal_grand_density(double xi, double T) {
  if (T == 0.0) return std::min(xi, 0.0);
  const double z = xi / T;
  if (z > 0.0) return -T * std::log1p(std::exp(-z));
  return xi - T * std::log1p(std::exp(z));
}

struct SolveCore {
  const RadialPotential& V;
  int ell;
  double mu;
  double T;  // < 0 encodes the T = 0 branch
  SolverOptions opts;

  std::shared_ptr<RadialGrid> grid;
  Eigen::MatrixXd kernel;    // K_l(p_i, p_j)
  Eigen::MatrixXd apply;     // kernel * diag(w q^2)
  Eigen::VectorXd xi, wp2;
  double pref = 0.0;         // shape reference momentum

  bool zero_T() const { return T < 0.0; }

  void build(double scale, double cutoff) {
    grid = std::make_shared<RadialGrid>(build_fermi_adapted_grid(
        mu, cutoff, scale, opts.grid.panels_per_decade, opts.grid.points_per_panel));
    const auto n = static_cast<Eigen::Index>(grid->size());
    kernel = channel_kernel(V, ell, *grid).matrix;
    xi.resize(n);
    wp2.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      xi[i] = xi_p(grid->nodes[i], mu);
      wp2[i] = grid->weights[i] * grid->nodes[i] * grid->nodes[i];
    }
    apply = kernel * wp2.asDiagonal();
  }

  Eigen::VectorXd denom(const Eigen::VectorXd& delta) const {
    Eigen::VectorXd d(delta.size());
    for (Eigen::Index i = 0; i < delta.size(); ++i)
      d[i] = zero_T() ? std::hypot(xi[i], delta[i]) : k_T_delta_xi(xi[i], delta[i], T);
    return d;
  }

  // F(Delta)(p) = -int q^2 K_l(p,q) Delta(q)/K^Delta(q) dq
  Eigen::VectorXd gap_map(const Eigen::VectorXd& delta) const {
    return -(apply * delta.cwiseQuotient(denom(delta)));
  }

  // Rayleigh-type amplitude equation along a fixed shape phi (sup-norm 1):
  // h(A) = <phi, F(A phi)>_w / (A <phi,phi>_w) - 1, decreasing from rho0-1.
  double amplitude_h(const Eigen::VectorXd& phi, double phi2, double A) const {
    const Eigen::VectorXd y = gap_map(A * phi);
    double num = 0.0;
    for (Eigen::Index i = 0; i < phi.size(); ++i) num += wp2[i] * phi[i] * y[i];
    return num / (A * phi2) - 1.0;
  }

  // root of h on a log ladder; 0 when even infinitesimal amplitudes decay
  double solve_amplitude(const Eigen::VectorXd& phi, double A_hint) const {
    double phi2 = 0.0;
    for (Eigen::Index i = 0; i < phi.size(); ++i) phi2 += wp2[i] * phi[i] * phi[i];
    double lo = A_hint * 1e-8, hi = A_hint;
    double hlo = amplitude_h(phi, phi2, lo);
    if (hlo < 0.0) {
      // further shrink to confirm decay at infinitesimal amplitude
      lo = A_hint * 1e-14;
      hlo = amplitude_h(phi, phi2, lo);
      if (hlo < 0.0) return 0.0;
    }
    double hhi = amplitude_h(phi, phi2, hi);
    int guard = 0;
    while (hhi > 0.0 && guard++ < 80) {
      lo = hi;
      hi *= 2.0;
      hhi = amplitude_h(phi, phi2, hi);
    }
    if (hhi > 0.0) throw NumericsError("gap solver: amplitude equation has no root");
    for (int it = 0; it < 60; ++it) {
      const double mid = std::sqrt(lo * hi);
      if (amplitude_h(phi, phi2, mid) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    return std::sqrt(lo * hi);
  }
};

GapSolution finish(SolveCore& core, Eigen::VectorXd delta, double defect, int iters,
                   bool converged) {
  GapSolution sol;
  sol.grid = core.grid;
  sol.ell = core.ell;
  sol.pt = ThermoPoint{core.zero_T() ? 0.0 : core.T, core.mu};
  const auto n = static_cast<Eigen::Index>(core.grid->size());
  sol.delta = std::move(delta);
  sol.residual = defect;
  sol.iterations = iters;
  sol.converged = converged;

  sol.alpha_hat.resize(n);
  sol.gamma_hat.resize(n);
  const bool trivial = sol.delta.cwiseAbs().maxCoeff() == 0.0;
  if (core.zero_T()) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double E = std::hypot(core.xi[i], sol.delta[i]);
      sol.alpha_hat[i] = E > 0.0 ? sol.delta[i] / (2.0 * E) : 0.0;
      const double root = std::sqrt(std::max(0.0, 1.0 - 4.0 * sol.alpha_hat[i] * sol.alpha_hat[i]));
      sol.gamma_hat[i] = core.xi[i] < 0.0 ? 0.5 * (1.0 + root) : 0.5 * (1.0 - root);
    }
    // zero-temperature functional, measured from the normal state:
    // (1/2)|xi|(1 - sqrt(1-4 alpha^2)) + <alpha|V|alpha>
    double kin = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double root = std::sqrt(std::max(0.0, 1.0 - 4.0 * sol.alpha_hat[i] * sol.alpha_hat[i]));
      kin += core.wp2[i] * 0.5 * std::abs(core.xi[i]) * (1.0 - root);
    }
    const Eigen::VectorXd valpha = core.apply * sol.alpha_hat;
    double inter = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) inter += core.wp2[i] * sol.alpha_hat[i] * valpha[i];
    sol.normal_free_energy_density = 0.0;
    sol.free_energy_density = trivial ? 0.0 : 4.0 * M_PI * (kin + inter);
    return sol;
  }

  double fnorm = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    fnorm += core.wp2[i] * normal_grand_density(core.xi[i], core.T);
  sol.normal_free_energy_density = 4.0 * M_PI * fnorm;
  if (trivial) {
    for (Eigen::Index i = 0; i < n; ++i) {
      sol.alpha_hat[i] = 0.0;
      sol.gamma_hat[i] = 1.0 / (1.0 + std::exp(std::min(700.0, core.xi[i] / core.T)));
    }
    sol.free_energy_density = sol.normal_free_energy_density;
    return sol;
  }
  const Eigen::VectorXd K = core.denom(sol.delta);
  for (Eigen::Index i = 0; i < n; ++i) {
    sol.gamma_hat[i] = 0.5 - core.xi[i] / (2.0 * K[i]);
    sol.alpha_hat[i] = sol.delta[i] / (2.0 * K[i]);
  }
  double f = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    f += core.wp2[i] * (core.xi[i] * sol.gamma_hat[i] -
                        core.T * block_entropy(sol.gamma_hat[i], sol.alpha_hat[i]));
  const Eigen::VectorXd valpha = core.apply * sol.alpha_hat;
  for (Eigen::Index i = 0; i < n; ++i) f += core.wp2[i] * sol.alpha_hat[i] * valpha[i];
  sol.free_energy_density = 4.0 * M_PI * f;
  return sol;
}

GapSolution run_solver(SolveCore& core) {
  const double T_eff = core.zero_T() ? 0.0 : core.T;
  const double A0 = core.opts.initial_amplitude > 0.0
                        ? core.opts.initial_amplitude
                        : 0.1 * std::max(T_eff, 0.01 * std::abs(core.mu));
  const double cutoff = core.opts.grid.cutoff > 0.0
                            ? core.opts.grid.cutoff
                            : 20.0 * std::max({std::sqrt(std::max(core.mu, 0.0)), 1.0,
                                               1.0 / core.V.range()});
  double scale = std::max(T_eff, A0);
  core.build(scale, cutoff);

  const double floor = core.opts.triviality_floor * A0;
  for (int round = 0; round < 2; ++round) {
    const auto n = static_cast<Eigen::Index>(core.grid->size());
    core.pref = core.mu > 0.0 ? std::sqrt(core.mu) : core.grid->nodes[0];
    // initial shape ~ K_l(p, pf): the emergent gap looks like V acting on the
    // Fermi sphere
    Eigen::VectorXd shape(n);
    for (Eigen::Index i = 0; i < n; ++i)
      shape[i] = kernel_value(core.V, core.ell, core.grid->nodes[i], core.pref);
    const double smax = shape.cwiseAbs().maxCoeff();
    if (smax == 0.0) return finish(core, Eigen::VectorXd::Zero(n), 0.0, 0, true);
    Eigen::Index ifermi = 0;
    core.xi.cwiseAbs().minCoeff(&ifermi);
    const double sgn = shape[ifermi] < 0.0 ? -1.0 : 1.0;
    shape *= sgn / smax;

    Eigen::VectorXd delta = A0 * shape;
    double defect = std::numeric_limits<double>::infinity();
    double prev_defect = defect;
    int bad_steps = 0;
    bool converged = false;
    int it = 0;
    for (; it < core.opts.max_iter; ++it) {
      const Eigen::VectorXd y = core.gap_map(delta);
      const double ymax = y.cwiseAbs().maxCoeff();
      const double dmax = delta.cwiseAbs().maxCoeff();
      defect = (y - delta).cwiseAbs().maxCoeff();
      if (dmax < floor || ymax < floor) {
        delta.setZero();
        converged = true;
        defect = 0.0;
        break;
      }
      if (defect <= core.opts.tol * dmax) {
        converged = true;
        break;
      }
      if (core.opts.amplitude_refine) {
        Eigen::VectorXd phi = y / ymax;
        const double A = core.solve_amplitude(phi, std::max(dmax, ymax) * 4.0);
        if (A == 0.0) {
          delta.setZero();
          converged = true;
          defect = 0.0;
          break;
        }
        if (defect > prev_defect) ++bad_steps;
        const double eta = bad_steps > 1 ? core.opts.eta : 1.0;
        delta = (1.0 - eta) * delta + eta * (A * phi);
      } else {
        delta = (1.0 - core.opts.eta) * delta + core.opts.eta * y;
      }
      prev_defect = defect;
    }
    if (!converged)
      throw ConvergenceError("gap solver did not converge", defect, it);

    const double dmax = delta.cwiseAbs().maxCoeff();
    // regenerate the grid once when the converged gap sets a different scale
    if (round == 0 && dmax > 0.0) {
      const double target = std::max(T_eff, dmax);
      if (target > 5.0 * scale || target < 0.2 * scale) {
        scale = target;
        core.build(scale, cutoff);
        continue;
      }
    }
    return finish(core, std::move(delta), defect, it, converged);
  }
  throw NumericsError("gap solver: unreachable");
}

}  // namespace

GapSolution solve_gap(const RadialPotential& V, int ell, const ThermoPoint& pt,
                      const SolverOptions& opts) {
  if (!pt.valid()) throw std::invalid_argument("solve_gap: invalid ThermoPoint");
  if (pt.T == 0.0) return solve_gap_T0(V, ell, pt.mu, opts);
  SolveCore core{V, ell, pt.mu, pt.T, opts, nullptr, {}, {}, {}, {}, 0.0};
  return run_solver(core);
}

GapSolution solve_gap_T0(const RadialPotential& V, int ell, double mu,
                         const SolverOptions& opts) {
  if (!std::isfinite(mu)) throw std::invalid_argument("solve_gap_T0: bad mu");
  SolveCore core{V, ell, mu, -1.0, opts, nullptr, {}, {}, {}, {}, 0.0};
  return run_solver(core);
}

double free_energy(const GapSolution& sol) { return sol.free_energy_density; }

double energy_gap(const GapSolution& sol) {
  if (sol.delta.size() == 0) throw std::invalid_argument("energy_gap: empty solution");
  const auto& g = *sol.grid;
  const auto n = static_cast<Eigen::Index>(g.size());
  if (sol.trivial()) return sol.pt.mu >= 0.0 ? 0.0 : std::abs(sol.pt.mu);
  Eigen::Index imin = 0;
  double emin = std::numeric_limits<double>::infinity();
  Eigen::VectorXd E(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    E[i] = std::hypot(xi_p(g.nodes[i], sol.pt.mu), sol.delta[i]);
    if (E[i] < emin) {
      emin = E[i];
      imin = i;
    }
  }
  if (imin == 0 || imin == n - 1) return emin;
  // parabolic refinement through the minimizing node and neighbours
  const double x0 = g.nodes[imin - 1], x1 = g.nodes[imin], x2 = g.nodes[imin + 1];
  const double y0 = E[imin - 1], y1 = E[imin], y2 = E[imin + 1];
  const double d1 = (y1 - y0) / (x1 - x0), d2 = (y2 - y1) / (x2 - x1);
  const double c = (d2 - d1) / (x2 - x0);
  if (c <= 0.0) return emin;
  const double xs = 0.5 * (x0 + x1) - d1 / (2.0 * c);
  if (xs <= x0 || xs >= x2) return emin;
  const double ys = y0 + d1 * (xs - x0) + c * (xs - x0) * (xs - x1);
  return std::min(emin, ys);
}

double verify_gap_residual(const GapSolution& sol, const RadialPotential& V) {
  const auto& g = *sol.grid;
  const auto n = static_cast<Eigen::Index>(g.size());
  const Eigen::MatrixXd K = channel_kernel(V, sol.ell, g).matrix;
  Eigen::VectorXd wp2(n), Kdiag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    wp2[i] = g.weights[i] * g.nodes[i] * g.nodes[i];
    const double xi = xi_p(g.nodes[i], sol.pt.mu);
    Kdiag[i] = sol.pt.T > 0.0 ? k_T_delta_xi(xi, sol.delta[i], sol.pt.T)
                              : std::hypot(xi, sol.delta[i]);
  }
  const Eigen::VectorXd valpha = K * wp2.cwiseProduct(sol.alpha_hat);
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = Kdiag[i] * sol.alpha_hat[i] + valpha[i];
    num += wp2[i] * r * r;
    den += wp2[i] * sol.alpha_hat[i] * sol.alpha_hat[i];
  }
  if (den == 0.0) return 0.0;  // trivial solution
  return std::sqrt(num / den);
}

TranslationCheck check_translation_invariance_condition(const GapSolution& sol,
                                                        const RadialPotential& V) {
  const auto& g = *sol.grid;
  const auto n = static_cast<Eigen::Index>(g.size());
  const Eigen::MatrixXd K = channel_kernel(V, sol.ell, g).matrix;
  Eigen::VectorXd sq(n);
  Eigen::MatrixXd B = K;
  for (Eigen::Index i = 0; i < n; ++i)
    sq[i] = std::sqrt(g.weights[i]) * g.nodes[i];
  B = sq.asDiagonal() * B * sq.asDiagonal();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = xi_p(g.nodes[i], sol.pt.mu);
    B(i, i) += sol.pt.T > 0.0 ? k_T_delta_xi(xi, sol.delta[i], sol.pt.T)
                              : std::hypot(xi, sol.delta[i]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
  if (es.info() != Eigen::Success)
    throw NumericsError("translation-invariance check: eigensolver failed");
  TranslationCheck out;
  out.lowest_eigenvalue = es.eigenvalues()(0);
  const Eigen::VectorXd v = es.eigenvectors().col(0);
  Eigen::VectorXd wa = sq.cwiseProduct(sol.alpha_hat);
  const double na = wa.norm();
  out.alpha_overlap = na > 0.0 ? std::abs(v.dot(wa)) / na : 0.0;
  return out;
}

}  // namespace bcs
