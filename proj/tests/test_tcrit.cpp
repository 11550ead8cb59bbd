#include <doctest.h>

#include <cmath>

#include "bcs/errors.hpp"
#include "bcs/gapsolve.hpp"
#include "bcs/tcrit.hpp"
#include "support/adaptive.hpp"

using namespace bcs;

namespace {
const RadialPotential& gauss5() {
  static auto V = RadialPotential::gaussian(5.0, 1.0);
  return V;
}
RadialGrid tc_grid(double mu, double T) {
  return build_fermi_adapted_grid(mu, 20.0, T, 3, 12);
}
}  // namespace

TEST_CASE("BS eigenvalue: zero potential, monotonicity in lambda and T") {
  auto V0 = RadialPotential::gaussian(0.0, 1.0);
  RadialGrid g = tc_grid(1.0, 0.1);
  CHECK(bs_lowest_eigenvalue(V0, 0, {0.1, 1.0}, g) == doctest::Approx(0.0));

  double prev = 0.0;
  for (double lam : {0.2, 0.5, 1.0, 2.0}) {
    const double e = bs_lowest_eigenvalue(gauss5().scaled(lam), 0, {0.1, 1.0}, g);
    CHECK(e < prev);
    prev = e;
  }
  prev = -1e300;
  for (double T : {0.02, 0.1, 0.5, 2.0}) {
    const double e = bs_lowest_eigenvalue(gauss5().scaled(1.0), 0, {T, 1.0}, tc_grid(1.0, T));
    CHECK(e > prev);
    prev = e;
  }
}

TEST_CASE("channel decoupling: momentum vs position kernels give the same spectrum") {
  RadialGrid g = build_fermi_adapted_grid(1.0, 20.0, 0.1, 2, 8);
  for (int ell : {0, 1, 2}) {
    ChannelKernel kp = channel_kernel_position(gauss5(), ell, g);
    ChannelKernel km = channel_kernel_momentum(gauss5(), ell, g);
    Eigen::VectorXd d(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double K = k_T_xi(xi_p(g.nodes[i], 1.0), 0.1);
      d[i] = std::sqrt(g.weights[i] / K) * g.nodes[i];
    }
    Eigen::MatrixXd Ap = d.asDiagonal() * kp.matrix * d.asDiagonal();
    Eigen::MatrixXd Am = d.asDiagonal() * km.matrix * d.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ep(Ap), em(Am);
    CHECK((ep.eigenvalues() - em.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("critical temperature: repulsive potential has T_c = 0") {
  auto V = RadialPotential::gaussian(-2.0, 1.0);  // V >= 0
  TcOptions opts;
  opts.lmax = 2;
  TcReport rep = critical_temperature(V, 1.0, opts);
  CHECK(rep.tc == 0.0);
  CHECK(rep.channel == -1);
}

TEST_CASE("critical temperature: gaussian regression and report invariants") {
  TcOptions opts;
  opts.lmax = 2;
  TcReport rep = critical_temperature(gauss5(), 1.0, opts);
  // regression baseline of this artifact
  CHECK(rep.tc == doctest::Approx(1.3862484).epsilon(1e-5));
  CHECK(rep.channel == 0);
  CHECK(rep.bracket.second - rep.bracket.first <= 2.1e-6 * rep.tc);
  CHECK(!rep.degenerate);
  // lowest eigenvalue at T_c within 1e-6 of -1
  const double eig = bs_lowest_eigenvalue(gauss5(), 0, {rep.tc, 1.0},
                                          tc_grid(1.0, rep.tc));
  CHECK(eig == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("T_c decreases with lambda; weak-coupling exponent emerges") {
  const double e0 = e_channel(gauss5(), 0, 1.0);
  TcOptions opts;
  opts.lmax = 0;
  double prev_tc = 1e300, prev_dev = 1e300;
  for (double lam : {0.4, 0.25, 0.15}) {
    TcReport rep = critical_temperature(gauss5().scaled(lam), 1.0, opts);
    CHECK(rep.tc < prev_tc);
    prev_tc = rep.tc;
    const double dev = std::abs(lam * std::log(1.0 / rep.tc) - (-1.0 / e0));
    CHECK(dev < prev_dev);
    prev_dev = dev;
  }
}

TEST_CASE("e_channel: oracle values, sum rule, small-mu limit") {
  CHECK(e_channel(gauss5(), 0, 1.0) == doctest::Approx(-1.7247565694412231).epsilon(1e-11));
  CHECK(e_channel(gauss5(), 1, 1.0) == doctest::Approx(-0.53990966513188052).epsilon(1e-11));
  CHECK(e_channel(gauss5(), 2, 1.0) == doctest::Approx(-0.10502757404558157).epsilon(1e-11));

  double sum = 0.0;
  for (int l = 0; l <= 40; ++l) sum += (2.0 * l + 1.0) * e_channel(gauss5(), l, 1.0);
  const double target = gauss5().integral_3d() / (2.0 * M_PI * M_PI);
  CHECK(sum == doctest::Approx(target).epsilon(1e-6));

  // mu -> 0: e_0 -> (1/2pi^2) int V dx
  CHECK(e_channel(gauss5(), 0, 1e-8) == doctest::Approx(target).epsilon(1e-6));

  // Funk-Hecke cross-check: e_l = (2pi)^{-1/2} int_{-1}^1 Vhat(sqrt(2mu(1-u))) P_l(u) du
  for (int ell : {0, 1, 2}) {
    auto f = [&](double u) {
      const double k = std::sqrt(std::max(0.0, 2.0 - 2.0 * u));
      return gauss5().fourier_transform(k) * legendre_p(ell, u);
    };
    const double fh = oracle::integrate(f, -1.0, 1.0, 1e-13) / std::sqrt(2.0 * M_PI);
    CHECK(e_channel(gauss5(), ell, 1.0) == doctest::Approx(fh).epsilon(1e-8));
  }
}

TEST_CASE("w_channel: ladder cancellation and quadratic scaling in V") {
  WOptions wopts;
  const double w0 = w_channel(gauss5(), 0, 1.0, wopts);
  CHECK(std::isfinite(w0));
  // V -> cV scales w by c^2
  const double c = 1.3;
  const double w0c = w_channel(gauss5().scaled(c), 0, 1.0, wopts);
  CHECK(w0c == doctest::Approx(c * c * w0).epsilon(1e-8));

  // the bracket drift across the T-ladder stays below 1e-4 relative: evaluate
  // the bracket at the ladder ends through the public pieces
  const double el = e_channel(gauss5(), 0, 1.0);
  auto bracket = [&](double T) {
    RadialGrid g = build_fermi_adapted_grid(1.0, 30.0, T, 5, 16);
    double I = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double p = g.nodes[i];
      const double B = kernel_value(gauss5(), 0, p, 1.0);
      I += g.weights[i] * p * p * B * B / k_T_xi(xi_p(p, 1.0), T);
    }
    return I - m_mu({T, 1.0}) * el * el;
  };
  const double b1 = bracket(1e-6), b2 = bracket(1e-8);
  CHECK(std::abs(b1 - b2) <= 1e-4 * std::abs(b2));
}

TEST_CASE("b_mu: leading order and minimizing channel") {
  BmuResult b = b_mu(gauss5(), 1.0, 1e-4, 2);
  CHECK(b.value / 1e-4 == doctest::Approx(e_channel(gauss5(), 0, 1.0)).epsilon(1e-3));
  CHECK(b.ell == 0);
  CHECK(!b.e_min_ell.has_value());
  // b(lambda) = lambda e - lambda^2 w reproduced from the parts
  const double lam = 0.2;
  BmuResult b2 = b_mu(gauss5(), 1.0, lam, 1);
  const double manual = lam * e_channel(gauss5(), 0, 1.0) -
                        lam * lam * w_channel(gauss5(), 0, 1.0);
  CHECK(b2.value == doctest::Approx(manual).epsilon(1e-10));
}

TEST_CASE("weak-coupling formula: value and domain errors") {
  const double lam = 0.2;
  const double tf = tc_weak_coupling_formula(gauss5(), 1.0, lam, 1);
  const double b = b_mu(gauss5(), 1.0, lam, 1).value;
  CHECK(tf == doctest::Approx(kTcPrefactor * std::exp(1.0 / b)).epsilon(1e-12));
  auto rep = RadialPotential::gaussian(-1.0, 1.0);
  CHECK_THROWS_AS(tc_weak_coupling_formula(rep, 1.0, 0.2, 1), DomainError);
}

TEST_CASE("low-density formula: structure and domain errors") {
  CHECK_THROWS_AS(tc_low_density_formula(0.5, 1.0), DomainError);
  // a -> -inf limit: T_c -> mu (8/pi) e^{gamma-2}
  CHECK(tc_low_density_formula(-1e12, 2.0) == doctest::Approx(2.0 * kTcPrefactor).epsilon(1e-9));
  // mu -> c^2 mu with fixed a scales the exponent by 1/c
  const double a = -0.7, c = 3.0;
  const double t1 = tc_low_density_formula(a, 1.0), t2 = tc_low_density_formula(a, c * c);
  const double x1 = std::log(t1 / kTcPrefactor);
  const double x2 = std::log(t2 / (c * c * kTcPrefactor));
  CHECK(x2 == doctest::Approx(x1 / c).epsilon(1e-10));
}

TEST_CASE("zero-range: T_c against an independent adaptive-quadrature root") {
  const double a = -1.0, mu = 1.0;
  const double tc = tc_zero_range(a, mu);
  // oracle: adaptive quadrature of the same integral + coarse bisection
  auto G = [&](double T) {
    auto f = [&](double p) {
      const double xi = p * p - mu;
      const double K = std::abs(xi) < 1e-12 ? 2.0 * T : xi / std::tanh(xi / (2.0 * T));
      return p * p / K - 1.0;
    };
    const double L = 60.0;
    double s = oracle::integrate_pieces(
        f, {0.0, 1.0 - 1e-4, 1.0 - 1e-7, 1.0, 1.0 + 1e-7, 1.0 + 1e-4, 2.0, L}, 1e-12);
    return s + 0.5 * std::log((L + 1.0) / (L - 1.0));
  };
  const double target = -M_PI / (2.0 * a);
  double lo = 1e-4, hi = 1.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = std::sqrt(lo * hi);
    (G(mid) > target ? lo : hi) = mid;
  }
  CHECK(tc == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-6));
  CHECK_THROWS_AS(tc_zero_range(0.2, 1.0), DomainError);
}

TEST_CASE("zero-range gap: decreasing in T, zero at and above T_c") {
  const double a = -0.4, mu = 1.0;
  const double tc = tc_zero_range(a, mu);
  double prev = 1e300;
  for (double frac : {0.2, 0.5, 0.8}) {
    const double d = gap_zero_range(a, mu, frac * tc);
    CHECK(d > 0.0);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(gap_zero_range(a, mu, tc) <= 1e-7 * tc);
  CHECK(gap_zero_range(a, mu, 1.5 * tc) == 0.0);
}

TEST_CASE("linear criterion equivalence on a small straddling grid") {
  const double lam = 0.5;
  auto V = gauss5().scaled(lam);
  TcOptions opts;
  opts.lmax = 0;
  const double tc = critical_temperature(V, 1.0, opts).tc;
  for (double frac : {0.9, 1.1}) {
    const double T = frac * tc;
    GapSolution sol = solve_gap(V, 0, {T, 1.0});
    const double eig = bs_lowest_eigenvalue(V, 0, {T, 1.0}, tc_grid(1.0, T));
    // nontrivial gap iff the BS eigenvalue is below -1 (infspec(K_T+V) < 0)
    CHECK(!sol.trivial() == (eig < -1.0));
  }
}
