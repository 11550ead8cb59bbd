#include "bcs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "bcs/errors.hpp"

namespace bcs {

namespace {

GaussRule compute_gauss_legendre(int n) {
  // Newton iteration on P_n, nodes seeded by the Chebyshev approximation.
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // three-term recurrence for P_n(x) and P_{n-1}(x)
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.x[n / 2] = 0.0;
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1 || n > 512) throw std::invalid_argument("gauss_legendre: bad order");
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

double RadialGrid::integrate(std::span<const double> f) const {
  if (f.size() != nodes.size())
    throw std::invalid_argument("RadialGrid::integrate: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += weights[i] * f[i];
  return s;
}

RadialGrid build_fermi_adapted_grid(double mu, double cutoff, double scale,
                                    int panels_per_decade, int points_per_panel) {
  if (!std::isfinite(mu) || !std::isfinite(cutoff) || !std::isfinite(scale))
    throw std::invalid_argument("build_fermi_adapted_grid: non-finite input");
  if (scale <= 0.0) throw std::invalid_argument("build_fermi_adapted_grid: scale <= 0");
  if (panels_per_decade < 1 || points_per_panel < 2)
    throw std::invalid_argument("build_fermi_adapted_grid: bad panel parameters");
  if (cutoff <= 0.0 || cutoff * cutoff <= std::max(mu, 0.0))
    throw DomainError("build_fermi_adapted_grid: cutoff too small");

  const double ratio = std::pow(10.0, 1.0 / panels_per_decade);
  std::vector<double> edges;
  edges.push_back(0.0);
  edges.push_back(cutoff);

  if (mu > 0.0) {
    const double pf = std::sqrt(mu);
    edges.push_back(pf);
    // innermost panel half-width: the K_T feature |p^2-mu| ~ scale translates
    // to |p-pf| ~ scale/(2 pf); clamp to what doubles can resolve around pf
    double wmin = scale / (2.0 * pf);
    wmin = std::max(wmin, 8.0 * std::numeric_limits<double>::epsilon() * pf);
    wmin = std::min(wmin, 0.25 * std::min(pf, cutoff - pf));
    for (double d = wmin; d < pf; d *= ratio) edges.push_back(pf - d);
    for (double d = wmin; pf + d < cutoff; d *= ratio) edges.push_back(pf + d);
  } else {
    // no Fermi panel; log-spaced panels so small-p structure at ~scale resolves
    double w0 = std::min(scale, 0.25 * cutoff);
    w0 = std::max(w0, 1e-8 * cutoff);
    for (double d = w0; d < cutoff; d *= ratio) edges.push_back(d);
  }

  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double a, double b) {
                            return std::abs(a - b) <=
                                   4.0 * std::numeric_limits<double>::epsilon() *
                                       std::max(std::abs(a), std::abs(b));
                          }),
              edges.end());

  RadialGrid grid;
  grid.panel_edges = edges;
  grid.fermi_momentum = mu > 0.0 ? std::sqrt(mu) : 0.0;
  grid.cutoff = cutoff;
  const GaussRule& rule = gauss_legendre(points_per_panel);
  grid.nodes.reserve((edges.size() - 1) * points_per_panel);
  grid.weights.reserve((edges.size() - 1) * points_per_panel);
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double a = edges[e], b = edges[e + 1];
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < points_per_panel; ++i) {
      grid.nodes.push_back(c + h * rule.x[i]);
      grid.weights.push_back(h * rule.w[i]);
    }
  }
  return grid;
}

double power_law_tail(double cutoff, double f_at_09, double f_at_cut) {
  // f ~ C p^-s  =>  int_L^inf f dp = f(L) L/(s-1)
  if (f_at_cut == 0.0 || f_at_09 == 0.0) return 0.0;
  if (f_at_09 * f_at_cut < 0.0) return 0.0;
  const double r = f_at_cut / f_at_09;
  if (r <= 0.0 || r >= 1.0) return 0.0;  // not decaying
  const double s = -std::log(r) / std::log(1.0 / 0.9);
  if (s <= 1.05) return 0.0;
  return f_at_cut * cutoff / (s - 1.0);
}

}  // namespace bcs
