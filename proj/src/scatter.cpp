#include "bcs/scatter.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "bcs/errors.hpp"
#include "bcs/quadrature.hpp"

namespace bcs {

namespace {

struct PanelRule {
  std::vector<double> edges;            // panel boundaries
  std::vector<double> r, w;             // all nodes/weights
  int pts = 0;                          // nodes per panel
  int panel_of(int i) const { return i / pts; }
};

PanelRule scatter_rule(const RadialPotential& V, int pts_per_panel = 10) {
  const double Rsup = V.r_support();
  std::vector<double> base = V.interior_breakpoints();
  base.insert(base.begin(), 0.0);
  base.push_back(Rsup);
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  const double hmax = std::min(Rsup / 48.0, V.range() / 6.0);
  const GaussRule& rule = gauss_legendre(pts_per_panel);
  PanelRule out;
  out.pts = pts_per_panel;
  out.edges.push_back(0.0);
  for (std::size_t i = 0; i + 1 < base.size(); ++i) {
    const int n = std::max(1, static_cast<int>(std::ceil((base[i + 1] - base[i]) / hmax)));
    for (int m = 1; m <= n; ++m)
      out.edges.push_back(base[i] + (base[i + 1] - base[i]) * m / n);
  }
  for (std::size_t e = 0; e + 1 < out.edges.size(); ++e) {
    const double c = 0.5 * (out.edges[e] + out.edges[e + 1]);
    const double h = 0.5 * (out.edges[e + 1] - out.edges[e]);
    for (int k = 0; k < pts_per_panel; ++k) {
      out.r.push_back(c + h * rule.x[k]);
      out.w.push_back(h * rule.w[k]);
    }
  }
  return out;
}

// quadrature matrix G with G(i,:) f = int_0^Rsup min(r_i, r') f(r') dr' for
// smooth f.  Panels not containing r_i use their Gauss weights directly; on
// the panel containing r_i the integral is split at the kink and both halves
// are integrated exactly against the panel's Lagrange interpolant.
Eigen::MatrixXd min_kernel_quadrature(const PanelRule& q) {
  const int n = static_cast<int>(q.r.size());
  const int pts = q.pts;
  const GaussRule& rule = gauss_legendre(pts);
  Eigen::MatrixXd G(n, n);
  for (int i = 0; i < n; ++i) {
    const int pi = q.panel_of(i);
    for (int j = 0; j < n; ++j) {
      const int pj = q.panel_of(j);
      if (pj < pi)
        G(i, j) = q.w[j] * q.r[j];
      else if (pj > pi)
        G(i, j) = q.w[j] * q.r[i];
      else
        G(i, j) = 0.0;  // filled below
    }
    // panel containing the kink: integrate r' L_j(r') on [a, r_i] and
    // r_i L_j(r') on [r_i, b] with the barycentric Lagrange basis L_j
    const double a = q.edges[pi], b = q.edges[pi + 1];
    const int j0 = pi * pts;
    std::array<double, 64> bw{};  // barycentric weights
    for (int j = 0; j < pts; ++j) {
      double prod = 1.0;
      for (int k = 0; k < pts; ++k)
        if (k != j) prod *= (q.r[j0 + j] - q.r[j0 + k]);
      bw[j] = 1.0 / prod;
    }
    auto lagrange = [&](int j, double x) {
      double num = bw[j], den = 0.0;
      for (int k = 0; k < pts; ++k) {
        if (x == q.r[j0 + k]) return j == k ? 1.0 : 0.0;
        den += bw[k] / (x - q.r[j0 + k]);
      }
      return num / ((x - q.r[j0 + j]) * den);
    };
    for (int half = 0; half < 2; ++half) {
      const double lo = half == 0 ? a : q.r[i];
      const double hi = half == 0 ? q.r[i] : b;
      const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
      if (h <= 0.0) continue;
      for (int k = 0; k < pts; ++k) {
        const double x = c + h * rule.x[k];
        const double fac = h * rule.w[k] * (half == 0 ? x : q.r[i]);
        for (int j = 0; j < pts; ++j) G(i, j0 + j) += fac * lagrange(j, x);
      }
    }
  }
  return G;
}

}  // namespace

ScatteringReport scattering_length(const RadialPotential& V) {
  const PanelRule q = scatter_rule(V);
  const auto n = static_cast<Eigen::Index>(q.r.size());
  Eigen::VectorXd vs(n), av(n), sg(n), sw(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = V(q.r[i]);
    av[i] = std::sqrt(std::abs(v));
    sg[i] = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    vs[i] = sg[i] * av[i];
    sw[i] = std::sqrt(q.w[i]);
  }

  // bound-state gate: spectrum of V^{1/2} G |V|^{1/2} (G = min(r,r')) equals
  // that of C^{1/2} S C^{1/2}, C = D_{|V|^{1/2} sqrt(w)} G D_{|V|^{1/2} sqrt(w)}
  Eigen::MatrixXd C(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      C(i, j) = av[i] * sw[i] * std::min(q.r[i], q.r[j]) * av[j] * sw[j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ec(C);
  if (ec.info() != Eigen::Success)
    throw NumericsError("scattering_length: eigensolver failed on C");
  Eigen::VectorXd lam = ec.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd Chalf =
      ec.eigenvectors() * lam.cwiseSqrt().asDiagonal() * ec.eigenvectors().transpose();
  Eigen::MatrixXd M = Chalf * sg.asDiagonal() * Chalf;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(M);
  if (em.info() != Eigen::Success)
    throw NumericsError("scattering_length: eigensolver failed on M");
  const double floor = em.eigenvalues()(0);

  ScatteringReport rep;
  rep.bs_spectrum_floor = floor;
  rep.bound_state_free = floor > -1.0;
  rep.method = ScatteringReport::Method::resolvent;
  if (!rep.bound_state_free)
    throw DomainError(
        "scattering_length: Birman-Schwinger floor <= -1 (zero-energy resonance or "
        "bound state; the resolvent formula does not apply)");

  // (1 + B) phi = r V^{1/2} with the kink-exact quadrature of min(r,r')
  const Eigen::MatrixXd G = min_kernel_quadrature(q);
  Eigen::MatrixXd B = Eigen::MatrixXd::Identity(n, n);
  B += vs.asDiagonal() * G * av.asDiagonal();
  Eigen::VectorXd g(n);
  for (Eigen::Index i = 0; i < n; ++i) g[i] = q.r[i] * vs[i];
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
  const Eigen::VectorXd phi = lu.solve(g);
  const double relerr = (B * phi - g).norm() / std::max(g.norm(), 1e-300);
  if (!phi.allFinite() || relerr > 1e-8)
    throw NumericsError("scattering_length: ill-conditioned resolvent solve");

  double a = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) a += q.w[i] * q.r[i] * av[i] * phi[i];
  rep.a = a;
  return rep;
}

double scattering_length_ode(const RadialPotential& V) {
  // RK4 on u'' = V u; beyond r_support u is linear and a = r - u/u'
  const double R = V.r_support();
  const int nsteps = 200000;
  const double h = R / nsteps;
  double u = 0.0, up = 1.0;
  auto f = [&V](double rr, double uu) { return V(rr) * uu; };
  for (int i = 0; i < nsteps; ++i) {
    // r from the index so that substeps never drift across a support edge
    const double r = R * i / nsteps;
    const double rm = R * (i + 0.5) / nsteps;
    const double rp = R * (i + 1.0) / nsteps;
    const double k1u = up, k1p = f(r, u);
    const double k2u = up + 0.5 * h * k1p, k2p = f(rm, u + 0.5 * h * k1u);
    const double k3u = up + 0.5 * h * k2p, k3p = f(rm, u + 0.5 * h * k2u);
    const double k4u = up + h * k3p, k4p = f(rp, u + h * k3u);
    u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    up += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    if (!std::isfinite(u) || !std::isfinite(up))
      throw NumericsError("scattering_length_ode: integration blew up");
  }
  if (up == 0.0) throw DomainError("scattering_length_ode: zero-energy resonance (a infinite)");
  return R - u / up;
}

}  // namespace bcs
