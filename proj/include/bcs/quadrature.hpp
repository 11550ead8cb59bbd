#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bcs {

// Gauss-Legendre rule on [-1,1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

// n-point rule, cached per n.
const GaussRule& gauss_legendre(int n);

// Composite Gauss-Legendre grid on (0, cutoff] for radial momentum
// integrals int_0^cutoff f(p) dp.  Panels refine geometrically towards the
// Fermi momentum sqrt(mu), where 1/K_T develops a feature of width
// ~ scale/sqrt(mu); a panel edge sits exactly at sqrt(mu).
struct RadialGrid {
  std::vector<double> nodes;        // strictly increasing, in (0, cutoff]
  std::vector<double> weights;      // > 0, sum = cutoff
  std::vector<double> panel_edges;  // sorted, front() = 0, back() = cutoff
  double fermi_momentum = 0.0;      // sqrt(mu) for mu > 0, else 0
  double cutoff = 0.0;

  std::size_t size() const { return nodes.size(); }

  double integrate(std::span<const double> f) const;

  template <class F>
  double integrate_fn(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

RadialGrid build_fermi_adapted_grid(double mu, double cutoff, double scale,
                                    int panels_per_decade = 4,
                                    int points_per_panel = 16);

struct GridOptions {
  int panels_per_decade = 4;
  int points_per_panel = 16;
  double cutoff = -1.0;  // < 0: 20*max(sqrt(mu),1), widened by the caller as needed
};

// Tail estimate for int_cutoff^inf f(p) dp when f decays like a power law.
// Fits the exponent from f at two abscissae near the cutoff; returns 0 when
// the samples do not look like a decaying power.
double power_law_tail(double cutoff, double f_at_09, double f_at_cut);

}  // namespace bcs
