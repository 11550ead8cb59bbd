#include "bcs/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bcs/errors.hpp"
#include "bcs/specfun.hpp"

namespace bcs {

namespace {
constexpr double kInv2PiSqrt = 0.398942280401432678;   // (2pi)^{-1/2}
constexpr double kInv2Pi32 = 0.0634936359342409697;    // (2pi)^{-3/2}
}  // namespace

RadialPotential RadialPotential::gaussian(double v, double s) {
  if (!(s > 0.0) || !std::isfinite(v))
    throw std::invalid_argument("RadialPotential::gaussian: bad parameters");
  RadialPotential V;
  V.family_ = PotentialFamily::gaussian;
  V.v_ = v;
  V.s_ = s;
  return V;
}

RadialPotential RadialPotential::square_well(double v, double R) {
  if (!(R > 0.0) || !std::isfinite(v))
    throw std::invalid_argument("RadialPotential::square_well: bad parameters");
  RadialPotential V;
  V.family_ = PotentialFamily::square_well;
  V.v_ = v;
  V.s_ = R;
  return V;
}

RadialPotential RadialPotential::exponential(double v, double s) {
  if (!(s > 0.0) || !std::isfinite(v))
    throw std::invalid_argument("RadialPotential::exponential: bad parameters");
  RadialPotential V;
  V.family_ = PotentialFamily::exponential;
  V.v_ = v;
  V.s_ = s;
  return V;
}

RadialPotential RadialPotential::tabulated(std::vector<double> r, std::vector<double> v) {
  if (r.size() != v.size() || r.size() < 3)
    throw std::invalid_argument("RadialPotential::tabulated: need >= 3 samples");
  double peak = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i]) || !std::isfinite(v[i]))
      throw std::invalid_argument("RadialPotential::tabulated: non-finite data");
    if (i > 0 && r[i] <= r[i - 1])
      throw std::invalid_argument("RadialPotential::tabulated: nodes must increase");
    peak = std::max(peak, std::abs(v[i]));
  }
  if (peak == 0.0) throw std::invalid_argument("RadialPotential::tabulated: V == 0");
  if (std::abs(v.back()) > 1e-8 * peak)
    throw std::invalid_argument(
        "RadialPotential::tabulated: tail value exceeds 1e-8 of peak; "
        "extend the table until V has decayed");

  RadialPotential V;
  V.family_ = PotentialFamily::tabulated;
  V.s_ = r.back();
  V.tab_r_ = std::move(r);
  V.tab_v_ = std::move(v);

  // Fritsch-Carlson monotone cubic slopes: no overshoot between samples,
  // which would otherwise alias into Vhat at large p
  const auto& x = V.tab_r_;
  const auto& y = V.tab_v_;
  const std::size_t n = x.size();
  std::vector<double> h(n - 1), del(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    del[i] = (y[i + 1] - y[i]) / h[i];
  }
  V.tab_d_.assign(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (del[i - 1] * del[i] > 0.0) {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      V.tab_d_[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
    }
  }
  V.tab_d_[0] = del[0];
  V.tab_d_[n - 1] = del[n - 2];
  return V;
}

RadialPotential RadialPotential::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open potential file: " + path);
  std::vector<double> r, v;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    double ri, vi;
    if (ss >> ri >> vi) {
      r.push_back(ri);
      v.push_back(vi);
    }
  }
  if (r.size() < 3) throw ConfigError("potential file has fewer than 3 samples: " + path);
  return tabulated(std::move(r), std::move(v));
}

RadialPotential RadialPotential::scaled(double lambda) const {
  if (!(lambda >= 0.0)) throw std::invalid_argument("RadialPotential::scaled: lambda < 0");
  RadialPotential V = *this;
  V.coupling_ = coupling_ * lambda;
  return V;
}

double RadialPotential::profile(double r) const {
  switch (family_) {
    case PotentialFamily::gaussian:
      return -v_ * std::exp(-r * r / (2.0 * s_ * s_));
    case PotentialFamily::square_well:
      return r <= s_ ? -v_ : 0.0;
    case PotentialFamily::exponential:
      return -v_ * std::exp(-r / s_);
    case PotentialFamily::tabulated: {
      const auto& x = tab_r_;
      if (r <= x.front()) return tab_v_.front();
      if (r >= x.back()) return 0.0;
      const auto it = std::upper_bound(x.begin(), x.end(), r);
      const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
      const double h = x[i + 1] - x[i], t = (r - x[i]) / h;
      const double t2 = t * t, t3 = t2 * t;
      return tab_v_[i] * (2 * t3 - 3 * t2 + 1) + h * tab_d_[i] * (t3 - 2 * t2 + t) +
             tab_v_[i + 1] * (-2 * t3 + 3 * t2) + h * tab_d_[i + 1] * (t3 - t2);
    }
  }
  return 0.0;
}

double RadialPotential::operator()(double r) const { return coupling_ * profile(r); }

std::vector<double> RadialPotential::interior_breakpoints() const {
  if (family_ != PotentialFamily::tabulated) return {};
  return tab_r_;
}

double RadialPotential::r_support() const {
  switch (family_) {
    case PotentialFamily::gaussian: return 13.0 * s_;
    case PotentialFamily::square_well: return s_;
    case PotentialFamily::exponential: return 60.0 * s_;
    case PotentialFamily::tabulated: return tab_r_.back();
  }
  return s_;
}

double RadialPotential::osc_scale() const {
  switch (family_) {
    case PotentialFamily::gaussian: return 0.5 / s_;
    case PotentialFamily::exponential: return 0.5 / s_;
    case PotentialFamily::square_well: return 0.25 * M_PI / s_;
    case PotentialFamily::tabulated: return 0.25 * M_PI / tab_r_.back();
  }
  return 0.5 / s_;
}

double RadialPotential::integral_3d() const {
  switch (family_) {
    case PotentialFamily::gaussian: {
      // 4pi int r^2 (-v) e^{-r^2/2s^2} dr = -v (2pi s^2)^{3/2}
      return -coupling_ * v_ * std::pow(2.0 * M_PI * s_ * s_, 1.5);
    }
    case PotentialFamily::square_well:
      return -coupling_ * v_ * 4.0 * M_PI / 3.0 * s_ * s_ * s_;
    case PotentialFamily::exponential:
      return -coupling_ * v_ * 8.0 * M_PI * s_ * s_ * s_;
    case PotentialFamily::tabulated: {
      // composite GL over the table
      double sum = 0.0;
      const GaussRule& rule = gauss_legendre(12);
      for (std::size_t i = 0; i + 1 < tab_r_.size(); ++i) {
        const double a = tab_r_[i], b = tab_r_[i + 1];
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (std::size_t k = 0; k < rule.x.size(); ++k) {
          const double r = c + h * rule.x[k];
          sum += h * rule.w[k] * r * r * (*this)(r);
        }
      }
      return 4.0 * M_PI * sum;
    }
  }
  return 0.0;
}

double RadialPotential::fourier_transform(double p) const {
  if (!(p >= 0.0)) throw std::invalid_argument("fourier_transform: p < 0");
  switch (family_) {
    case PotentialFamily::gaussian:
      return -coupling_ * v_ * s_ * s_ * s_ * std::exp(-0.5 * s_ * s_ * p * p);
    case PotentialFamily::exponential:
      // (2pi)^{-3/2} 8 pi s^3 / (1 + s^2 p^2)^2
      {
        const double d = 1.0 + s_ * s_ * p * p;
        return -coupling_ * v_ * kInv2Pi32 * 8.0 * M_PI * s_ * s_ * s_ / (d * d);
      }
    case PotentialFamily::square_well: {
      const double R = s_, x = p * R;
      double shape;  // int_0^R r^2 j0(pr) dr = (sin x - x cos x)/p^3
      if (x < 1e-3) {
        shape = R * R * R / 3.0 * (1.0 - x * x / 10.0);
      } else {
        shape = (std::sin(x) - x * std::cos(x)) / (p * p * p);
      }
      return -coupling_ * v_ * kInv2Pi32 * 4.0 * M_PI * shape;
    }
    case PotentialFamily::tabulated: {
      double sum = 0.0;
      const GaussRule& rule = gauss_legendre(12);
      // subdivide each table interval so that p*h stays small
      for (std::size_t i = 0; i + 1 < tab_r_.size(); ++i) {
        const double a = tab_r_[i], b = tab_r_[i + 1];
        const int nsub = std::max(1, static_cast<int>(std::ceil(p * (b - a) / 1.5)));
        for (int m = 0; m < nsub; ++m) {
          const double aa = a + (b - a) * m / nsub, bb = a + (b - a) * (m + 1) / nsub;
          const double c = 0.5 * (aa + bb), h = 0.5 * (bb - aa);
          for (std::size_t k = 0; k < rule.x.size(); ++k) {
            const double r = c + h * rule.x[k];
            sum += h * rule.w[k] * r * r * (*this)(r)*spherical_bessel_j(0, p * r);
          }
        }
      }
      return kInv2Pi32 * 4.0 * M_PI * sum;
    }
  }
  return 0.0;
}

double modified_bessel_i_scaled(int ell, double x) {
  if (ell < 0 || !(x >= 0.0))
    throw std::invalid_argument("modified_bessel_i_scaled: bad arguments");
  if (x == 0.0) return ell == 0 ? 1.0 : 0.0;
  const double i0 = x < 1e-4 ? std::exp(-x) * (1.0 + x * x / 6.0)
                             : (1.0 - std::exp(-2.0 * x)) / (2.0 * x);
  if (ell == 0) return i0;
  if (x < 0.5 * (2.0 * ell + 3.0) && x < 50.0) {
    // e^{-x} x^l/(2l+1)!! sum_k (x^2/2)^k / (k! (2l+3)...(2l+1+2k))
    double pref = std::exp(-x);
    for (int k = 1; k <= ell; ++k) pref *= x / (2 * k + 1);
    double term = 1.0, sum = 1.0;
    const double x2h = 0.5 * x * x;
    for (int k = 1; k < 200; ++k) {
      term *= x2h / (k * (2.0 * ell + 1.0 + 2.0 * k));
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return pref * sum;
  }
  // downward recurrence i_{k-1} = i_{k+1} + (2k+1)/x i_k, normalized by i0.
  // the two recurrence solutions separate like e^{(M^2-l^2)/x}, so the Miller
  // start index needs the sqrt(x) margin at large x
  const int lstart = ell + 40 + static_cast<int>(std::ceil(std::sqrt(40.0 * x)));
  double fp = 0.0, fc = 1e-280;
  double target = 0.0;
  for (int k = lstart; k >= 1; --k) {
    double fm = fp + (2.0 * k + 1.0) / x * fc;
    if (k - 1 == ell) target = fm;
    fp = fc;
    fc = fm;
    if (std::abs(fc) > 1e250) {
      fc *= 1e-250;
      fp *= 1e-250;
      target *= 1e-250;
    }
  }
  if (ell == 0) target = fc;
  return target * (i0 / fc);
}

namespace {

// r-quadrature panels for int_0^Rsup r^2 V j_l(pr) j_l(qr) dr; panel width
// keeps the fastest phase (p+q)h below ~pi/2 so 12-point GL is exact
std::vector<double> position_panels(const RadialPotential& V, double fmax) {
  const double Rsup = V.r_support();
  const double hmax = std::min(Rsup / 6.0, 0.5 * M_PI / std::max(fmax, 1.0 / Rsup));
  std::vector<double> base = V.interior_breakpoints();  // C^1 knots of tabulated data
  base.insert(base.begin(), 0.0);
  base.push_back(Rsup);
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  std::vector<double> edges;
  for (std::size_t i = 0; i + 1 < base.size(); ++i) {
    const double a = base[i], b = base[i + 1];
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / hmax)));
    for (int m = 0; m < n; ++m) edges.push_back(a + (b - a) * m / n);
  }
  edges.push_back(Rsup);
  return edges;
}

struct RQuad {
  std::vector<double> r, w;  // w includes r^2 V(r)
};

RQuad position_rule(const RadialPotential& V, double fmax) {
  const auto edges = position_panels(V, fmax);
  const GaussRule& rule = gauss_legendre(12);
  RQuad q;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double c = 0.5 * (edges[e] + edges[e + 1]);
    const double h = 0.5 * (edges[e + 1] - edges[e]);
    for (std::size_t k = 0; k < rule.x.size(); ++k) {
      const double r = c + h * rule.x[k];
      q.r.push_back(r);
      q.w.push_back(h * rule.w[k] * r * r * V(r));
    }
  }
  return q;
}

double gaussian_kernel_value(const RadialPotential& V, int ell, double p, double q) {
  // K_l(p,q) = -2 v s^3 (2pi)^{-1/2} e^{-s^2(p-q)^2/2} [e^{-x} i_l(x)], x = s^2 p q
  const double s = V.range();
  const double amp = -2.0 * V.coupling() * V.strength() * s * s * s * kInv2PiSqrt;
  const double d = s * (p - q);
  return amp * std::exp(-0.5 * d * d) * modified_bessel_i_scaled(ell, s * s * p * q);
}

// generic momentum route: Legendre-projected Vhat
double momentum_kernel_value(const RadialPotential& V, int ell, double p, double q) {
  if (V.family() == PotentialFamily::gaussian) return gaussian_kernel_value(V, ell, p, q);
  if (p < q) std::swap(p, q);
  const double osc = V.osc_scale();
  if (q <= 1e-14 * std::max(p, 1.0)) {
    // j_l(0) = delta_{l0}: int_{-1}^{1} P_l du = 2 delta_{l0}
    return ell == 0 ? 2.0 * kInv2PiSqrt * V.fourier_transform(p) : 0.0;
  }
  const double klo = p - q, khi = p + q;
  if (khi - klo <= 4.0 * osc) {
    // Vhat barely varies across the window: integrate in u directly
    const GaussRule& rule = gauss_legendre(std::min(200, ell + 16));
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.x.size(); ++k) {
      const double u = rule.x[k];
      const double kk = std::sqrt(std::max(0.0, p * p + q * q - 2.0 * p * q * u));
      sum += rule.w[k] * V.fourier_transform(kk) * legendre_p(ell, u);
    }
    return kInv2PiSqrt * sum;
  }
  // substitute k = |p-q|..p+q:  I = (1/pq) int k Vhat(k) P_l((p^2+q^2-k^2)/2pq) dk
  const GaussRule& rule = gauss_legendre(12 + ell / 2);
  const int n = std::max(4, static_cast<int>(std::ceil((khi - klo) / osc)));
  double sum = 0.0;
  for (int e = 0; e < n; ++e) {
    const double a = klo + (khi - klo) * e / n, b = klo + (khi - klo) * (e + 1) / n;
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (std::size_t k = 0; k < rule.x.size(); ++k) {
      const double kk = c + h * rule.x[k];
      double u = (p * p + q * q - kk * kk) / (2.0 * p * q);
      u = std::clamp(u, -1.0, 1.0);
      sum += h * rule.w[k] * kk * V.fourier_transform(kk) * legendre_p(ell, u);
    }
  }
  return kInv2PiSqrt * sum / (p * q);
}

void validate_kernel(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) throw NumericsError("channel kernel: non-finite entries");
}

}  // namespace

double kernel_value_position(const RadialPotential& V, int ell, double p, double q) {
  const RQuad rq = position_rule(V, p + q);
  double sum = 0.0;
  for (std::size_t k = 0; k < rq.r.size(); ++k)
    sum += rq.w[k] * spherical_bessel_j(ell, p * rq.r[k]) *
           spherical_bessel_j(ell, q * rq.r[k]);
  return 2.0 / M_PI * sum;
}

double kernel_value_momentum(const RadialPotential& V, int ell, double p, double q) {
  return momentum_kernel_value(V, ell, p, q);
}

double kernel_value(const RadialPotential& V, int ell, double p, double q) {
  switch (V.family()) {
    case PotentialFamily::gaussian:
    case PotentialFamily::exponential:
      return kernel_value_momentum(V, ell, p, q);
    default:
      return kernel_value_position(V, ell, p, q);
  }
}

ChannelKernel channel_kernel_position(const RadialPotential& V, int ell,
                                      const RadialGrid& grid) {
  const std::size_t n = grid.size();
  const double pmax = grid.cutoff;
  const RQuad rq = position_rule(V, 2.0 * pmax);
  const std::size_t nr = rq.r.size();
  Eigen::MatrixXd B(n, nr);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < nr; ++k)
      B(i, k) = spherical_bessel_j(ell, grid.nodes[i] * rq.r[k]);
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(rq.w.data(), nr);
  ChannelKernel K;
  K.ell = ell;
  K.grid = grid;
  K.matrix = (2.0 / M_PI) * (B * d.asDiagonal() * B.transpose());
  K.matrix = 0.5 * (K.matrix + K.matrix.transpose()).eval();
  validate_kernel(K.matrix);
  return K;
}

ChannelKernel channel_kernel_momentum(const RadialPotential& V, int ell,
                                      const RadialGrid& grid) {
  const std::size_t n = grid.size();
  ChannelKernel K;
  K.ell = ell;
  K.grid = grid;
  K.matrix.resize(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = momentum_kernel_value(V, ell, grid.nodes[i], grid.nodes[j]);
      K.matrix(i, j) = v;
      K.matrix(j, i) = v;
    }
  validate_kernel(K.matrix);
  return K;
}

ChannelKernel channel_kernel(const RadialPotential& V, int ell, const RadialGrid& grid) {
  switch (V.family()) {
    case PotentialFamily::gaussian:
    case PotentialFamily::exponential:
      return channel_kernel_momentum(V, ell, grid);
    default:
      return channel_kernel_position(V, ell, grid);
  }
}

}  // namespace bcs
