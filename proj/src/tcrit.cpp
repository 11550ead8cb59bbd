#include "bcs/tcrit.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

#include "bcs/errors.hpp"
#include "bcs/gapsolve.hpp"

namespace bcs {

namespace {

double default_cutoff(const RadialPotential& V, double mu) {
  return 20.0 * std::max({std::sqrt(std::max(mu, 0.0)), 1.0, 1.0 / V.range()});
}

}  // namespace

Eigen::VectorXd ChannelOperator::alpha_hat() const {
  // eigenvector v_i = sqrt(w_i p_i^2) K_T(p_i)^{1/2} alpha_hat(p_i) up to norm
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::VectorXd a(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double K = k_T_xi(xi_p(grid.nodes[i], pt.mu), pt.T);
    a[i] = lowest_eigenvector[i] /
           (std::sqrt(grid.weights[i] * K) * grid.nodes[i]);
  }
  // unit L^2 norm in the radial measure p^2 dp, positive near the Fermi surface
  double norm2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    norm2 += grid.weights[i] * grid.nodes[i] * grid.nodes[i] * a[i] * a[i];
  a /= std::sqrt(norm2);
  Eigen::Index ifermi = 0;
  double best = 1e300;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = std::abs(grid.nodes[i] - grid.fermi_momentum);
    if (d < best) {
      best = d;
      ifermi = i;
    }
  }
  if (a[ifermi] < 0.0) a = -a;
  return a;
}

ChannelOperator make_channel_operator(const RadialPotential& V, int ell,
                                      const ThermoPoint& pt, const RadialGrid& grid) {
  if (!(pt.T > 0.0)) throw std::invalid_argument("make_channel_operator: needs T > 0");
  ChannelOperator op;
  op.ell = ell;
  op.pt = pt;
  op.grid = grid;
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double K = k_T_xi(xi_p(grid.nodes[i], pt.mu), pt.T);
    d[i] = std::sqrt(grid.weights[i] / K) * grid.nodes[i];
  }
  op.matrix = channel_kernel(V, ell, grid).matrix;
  op.matrix = d.asDiagonal() * op.matrix * d.asDiagonal();
  op.matrix = 0.5 * (op.matrix + op.matrix.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.matrix);
  if (es.info() != Eigen::Success)
    throw NumericsError("channel operator: eigensolver failed");
  op.lowest_eigenvalue = es.eigenvalues()(0);
  op.lowest_eigenvector = es.eigenvectors().col(0);
  return op;
}

double bs_lowest_eigenvalue(const RadialPotential& V, int ell, const ThermoPoint& pt,
                            const RadialGrid& grid) {
  return make_channel_operator(V, ell, pt, grid).lowest_eigenvalue;
}

namespace {

struct ChannelSearch {
  const RadialPotential& V;
  double mu;
  int ell;
  double cutoff;
  const TcOptions& opts;
  std::vector<std::pair<double, double>> trace;

  double eig(double T) {
    RadialGrid g = build_fermi_adapted_grid(mu, cutoff, T, opts.grid.panels_per_decade,
                                            opts.grid.points_per_panel);
    const double e = bs_lowest_eigenvalue(V, ell, {T, mu}, g);
    trace.emplace_back(T, e);
    return e;
  }

  // lowest eigenvalue + 1 is increasing in T; returns the crossing, or 0 when
  // the channel stays non-negative above the floor
  double bisect(double floor, double ceiling, double seed) {
    double lo = floor, hi = ceiling;
    if (seed > 0.0) {
      double a = std::clamp(seed / 4.0, floor, ceiling);
      double b = std::clamp(seed * 4.0, floor, ceiling);
      const double fa = eig(a) + 1.0;
      if (fa > 0.0) {
        hi = a;
        if (eig(lo) + 1.0 > 0.0) return 0.0;
      } else {
        lo = a;
        double fb = eig(b) + 1.0;
        int guard = 0;
        while (fb < 0.0 && b < ceiling && guard++ < 60) {
          lo = b;
          b = std::min(b * 16.0, ceiling);
          fb = eig(b) + 1.0;
        }
        if (fb < 0.0)
          throw DomainError("critical_temperature: T_c >= ceiling " + std::to_string(ceiling));
        hi = b;
      }
    } else {
      if (eig(hi) + 1.0 < 0.0)
        throw DomainError("critical_temperature: T_c >= ceiling " + std::to_string(ceiling));
      if (eig(lo) + 1.0 > 0.0) return 0.0;
    }
    while (hi - lo > opts.rel_tol * hi) {
      const double mid = std::sqrt(lo * hi);
      if (eig(mid) + 1.0 > 0.0)
        hi = mid;
      else
        lo = mid;
    }
    return 0.5 * (lo + hi);
  }
};

}  // namespace

TcReport critical_temperature(const RadialPotential& V, double mu, const TcOptions& opts) {
  if (!std::isfinite(mu)) throw std::invalid_argument("critical_temperature: bad mu");
  const double floor = opts.t_floor > 0.0 ? opts.t_floor : 1e-12 * std::max(mu, 1.0);
  const double ceiling = opts.t_ceiling > 0.0 ? opts.t_ceiling : 100.0 * std::max(mu, 1.0);
  const double cutoff = opts.grid.cutoff > 0.0 ? opts.grid.cutoff : default_cutoff(V, mu);

  // order channels by e_l: the most attractive channel is searched first and
  // prunes the rest
  std::vector<int> order(opts.lmax + 1);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> e(opts.lmax + 1, 0.0);
  if (mu > 0.0) {
    for (int l = 0; l <= opts.lmax; ++l) e[l] = e_channel(V, l, mu);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return e[a] < e[b]; });
  }

  TcReport rep;
  rep.channel_tc.assign(opts.lmax + 1, 0.0);
  std::vector<std::pair<double, double>> best_trace;
  std::pair<double, double> best_bracket{0.0, 0.0};

  for (int l : order) {
    ChannelSearch search{V, mu, l, cutoff, opts, {}};
    // prune: if the eigenvalue is already above -1 just below the incumbent
    // T_c, this channel cannot raise the maximum
    if (rep.tc > 0.0) {
      const double probe = rep.tc * (1.0 - 4.0 * opts.rel_tol);
      if (probe > floor && search.eig(probe) + 1.0 > 0.0) continue;
    }
    double seed = 0.0;
    if (mu > 0.0 && e[l] < 0.0) {
      const double ex = 1.0 / (std::sqrt(mu) * e[l]);
      if (ex > std::log(floor / (mu * kTcPrefactor)))
        seed = mu * kTcPrefactor * std::exp(ex);
    }
    const double tc_l = search.bisect(floor, ceiling, seed);
    rep.channel_tc[l] = tc_l;
    if (tc_l > rep.tc) {
      if (rep.tc > 0.0 && tc_l - rep.tc <= opts.degeneracy_tol * tc_l)
        rep.degenerate = true;
      rep.tc = tc_l;
      rep.channel = l;
      best_trace = std::move(search.trace);
      best_bracket = {tc_l * (1.0 - opts.rel_tol), tc_l * (1.0 + opts.rel_tol)};
    } else if (tc_l > 0.0 && rep.tc - tc_l <= opts.degeneracy_tol * rep.tc) {
      rep.degenerate = true;
    }
  }
  rep.eigen_trace = std::move(best_trace);
  rep.bracket = best_bracket;
  return rep;
}

double e_channel(const RadialPotential& V, int ell, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("e_channel: requires mu > 0");
  const double pf = std::sqrt(mu);
  return kernel_value(V, ell, pf, pf);
}

double w_channel(const RadialPotential& V, int ell, double mu, const WOptions& opts) {
  if (!(mu > 0.0)) throw std::invalid_argument("w_channel: requires mu > 0");
  const double pf = std::sqrt(mu);
  const double el = e_channel(V, ell, mu);
  const double cutoff =
      opts.grid.cutoff > 0.0 ? opts.grid.cutoff : 1.5 * default_cutoff(V, mu);

  std::vector<double> vals;
  for (double tfac : opts.t_ladder) {
    const double T = tfac * mu;
    RadialGrid g = build_fermi_adapted_grid(mu, cutoff, T, opts.grid.panels_per_decade,
                                            opts.grid.points_per_panel);
    double I = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double p = g.nodes[i];
      const double B = kernel_value(V, ell, p, pf);
      I += g.weights[i] * p * p * B * B / k_T_xi(xi_p(p, mu), T);
    }
    // power-law tail of p^2 B^2/K_T ~ B(p)^2
    const double f1 = [&] {
      const double p = 0.9 * cutoff, B = kernel_value(V, ell, p, pf);
      return p * p * B * B / k_T_xi(xi_p(p, mu), T);
    }();
    const double f2 = [&] {
      const double B = kernel_value(V, ell, cutoff, pf);
      return cutoff * cutoff * B * B / k_T_xi(xi_p(cutoff, mu), T);
    }();
    I += power_law_tail(cutoff, f1, f2);
    vals.push_back(I - m_mu({T, mu}) * el * el);
  }

  const double drift = std::abs(vals.front() - vals.back());
  const double scale = std::max({std::abs(vals.back()), std::abs(el * el), 1e-300});
  if (drift > opts.drift_tol * scale)
    throw AccuracyError("w_channel: subtraction does not cancel across the T-ladder",
                        drift / scale);
  if (vals.size() >= 3) {
    // Aitken delta^2 on the last three ladder values
    const double a = vals[vals.size() - 3], b = vals[vals.size() - 2], c = vals.back();
    const double den = (c - b) - (b - a);
    if (std::abs(den) > 1e-14 * std::max(1.0, std::abs(c))) {
      const double extr = c - (c - b) * (c - b) / den;
      if (std::abs(extr - c) < 0.1 * std::max(1.0, std::abs(c))) return extr;
    }
  }
  return vals.back();
}

BmuResult b_mu(const RadialPotential& V, double mu, double lambda, int lmax,
               const WOptions& wopts) {
  if (!(lambda > 0.0)) throw std::invalid_argument("b_mu: requires lambda > 0");
  BmuResult out;
  out.value = std::numeric_limits<double>::infinity();
  int e_min_l = 0;
  double e_min = std::numeric_limits<double>::infinity();
  for (int l = 0; l <= lmax; ++l) {
    const double el = e_channel(V, l, mu);
    const double wl = w_channel(V, l, mu, wopts);
    const double bl = lambda * el - lambda * lambda * wl;
    if (bl < out.value) {
      out.value = bl;
      out.ell = l;
    }
    if (el < e_min) {
      e_min = el;
      e_min_l = l;
    }
  }
  if (e_min_l != out.ell) out.e_min_ell = e_min_l;
  return out;
}

double tc_weak_coupling_formula(const RadialPotential& V, double mu, double lambda,
                                int lmax, const WOptions& wopts) {
  if (!(mu > 0.0)) throw std::invalid_argument("tc_weak_coupling_formula: mu <= 0");
  const BmuResult b = b_mu(V, mu, lambda, lmax, wopts);
  if (!(b.value < 0.0))
    throw DomainError("tc_weak_coupling_formula: b_mu >= 0, no pairing at this order");
  return mu * kTcPrefactor * std::exp(1.0 / (std::sqrt(mu) * b.value));
}

double tc_low_density_formula(double a, double mu) {
  if (!(a < 0.0)) throw DomainError("tc_low_density_formula: requires a < 0");
  if (!(mu > 0.0)) throw std::invalid_argument("tc_low_density_formula: mu <= 0");
  return mu * kTcPrefactor * std::exp(M_PI / (2.0 * std::sqrt(mu) * a));
}

namespace {

// radial form of the zero-range integral:
//   G(Delta, T) = int_0^inf (p^2 tanh(E/2T)/E - 1) dp,  E = sqrt(xi^2 + Delta^2)
// so the gap equation reads G = -pi/(2a).
double zero_range_G(double delta, double T, double mu) {
  const double L = std::sqrt(mu + std::max({900.0 * mu, 120.0 * T, 40.0 * delta}));
  const double scale = std::max({T, delta, 1e-12 * mu});
  RadialGrid g = build_fermi_adapted_grid(mu, L, scale, 6, 20);
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double p = g.nodes[i];
    const double E = std::hypot(xi_p(p, mu), delta);
    const double th = T > 0.0 ? std::tanh(E / (2.0 * T)) : 1.0;
    s += g.weights[i] * (p * p * th / E - 1.0);
  }
  // analytic tails: mu/(p^2-mu) and the -Delta^2/(2 p^4) correction
  const double pf = std::sqrt(mu);
  s += 0.5 * pf * std::log((L + pf) / (L - pf));
  s -= delta * delta / (6.0 * L * L * L);
  return s;
}

}  // namespace

double tc_zero_range(double a, double mu) {
  if (!(a < 0.0)) throw DomainError("tc_zero_range: requires a < 0");
  if (!(mu > 0.0)) throw std::invalid_argument("tc_zero_range: mu <= 0");
  const double target = -M_PI / (2.0 * a);
  double hi = mu, lo = mu;
  int guard = 0;
  while (zero_range_G(0.0, hi, mu) > target) {
    hi *= 4.0;
    if (++guard > 40) throw DomainError("tc_zero_range: no root below ceiling");
  }
  guard = 0;
  while (zero_range_G(0.0, lo, mu) < target) {
    lo /= 10.0;
    if (lo < 1e-13 * mu) throw DomainError("tc_zero_range: no root above floor");
    if (++guard > 40) break;
  }
  for (int it = 0; it < 100; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (zero_range_G(0.0, mid, mu) > target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12 * hi) break;
  }
  return 0.5 * (lo + hi);
}

double gap_zero_range(double a, double mu, double T) {
  if (!(a < 0.0)) throw DomainError("gap_zero_range: requires a < 0");
  if (!(mu > 0.0) || !(T >= 0.0)) throw std::invalid_argument("gap_zero_range: bad mu/T");
  const double target = -M_PI / (2.0 * a);
  if (zero_range_G(0.0, T, mu) <= target) return 0.0;  // T >= T_c
  double hi = std::max(mu, T);
  int guard = 0;
  while (zero_range_G(hi, T, mu) > target) {
    hi *= 4.0;
    if (++guard > 40) throw DomainError("gap_zero_range: no root below ceiling");
  }
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (zero_range_G(mid, T, mu) > target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-13 * std::max(hi, mu)) break;
  }
  return 0.5 * (lo + hi);
}

std::vector<UniversalRatioSample> universal_ratio(const RadialPotential& V, double mu,
                                                  std::span<const double> lambdas,
                                                  const TcOptions& opts) {
  std::vector<UniversalRatioSample> out;
  for (double lam : lambdas) {
    const RadialPotential Vs = V.scaled(lam);
    UniversalRatioSample s;
    s.lambda = lam;
    s.tc = critical_temperature(Vs, mu, opts).tc;
    SolverOptions sopts;
    sopts.grid = opts.grid;
    GapSolution sol = solve_gap_T0(Vs, 0, mu, sopts);
    s.xi = energy_gap(sol);
    if (!(s.tc > 0.0)) throw DomainError("universal_ratio: T_c = 0 at lambda");
    s.ratio = s.xi / s.tc;
    out.push_back(s);
  }
  return out;
}

}  // namespace bcs
