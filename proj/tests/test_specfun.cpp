#include <doctest.h>

#include <cmath>
#include <random>

#include "bcs/errors.hpp"
#include "bcs/quadrature.hpp"
#include "bcs/specfun.hpp"
#include "support/adaptive.hpp"

using namespace bcs;

TEST_CASE("gauss_legendre integrates polynomials to the rule order") {
  const GaussRule& r = gauss_legendre(8);
  // exact for degree <= 15 on [-1,1]
  for (int deg : {0, 3, 8, 15}) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * std::pow(r.x[i], deg);
    const double exact = deg % 2 == 1 ? 0.0 : 2.0 / (deg + 1);
    CHECK(s == doctest::Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("fermi-adapted grid: construction contract") {
  RadialGrid g = build_fermi_adapted_grid(1.0, 20.0, 1e-4, 6, 16);

  // nodes strictly increasing inside (0, cutoff]
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g.nodes[i] > 0.0);
    CHECK(g.nodes[i] <= g.cutoff);
    if (i > 0) CHECK(g.nodes[i] > g.nodes[i - 1]);
    CHECK(g.weights[i] > 0.0);
  }

  // a panel edge sits exactly at sqrt(mu)
  bool found = false;
  for (double e : g.panel_edges)
    if (e == std::sqrt(1.0)) found = true;
  CHECK(found);

  // densest panel around p = 1 has width <= 1e-4
  double wmin = 1e300;
  for (std::size_t e = 0; e + 1 < g.panel_edges.size(); ++e)
    wmin = std::min(wmin, g.panel_edges[e + 1] - g.panel_edges[e]);
  CHECK(wmin <= 1e-4);

  // integrating 1 reproduces the cutoff
  std::vector<double> ones(g.size(), 1.0);
  CHECK(g.integrate(ones) == doctest::Approx(20.0).epsilon(1e-12));

  // Gauss exactness: int_0^20 p^2 dp = 20^3/3
  const double ip2 = g.integrate_fn([](double p) { return p * p; });
  CHECK(ip2 == doctest::Approx(20.0 * 20.0 * 20.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("fermi-adapted grid: argument validation") {
  CHECK_THROWS_AS(build_fermi_adapted_grid(1.0, 20.0, std::nan(""), 4, 16),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_fermi_adapted_grid(4.0, 1.5, 1e-3, 4, 16), DomainError);
}

TEST_CASE("fermi-adapted grid vs adaptive oracle on 1/K_T-type integrand") {
  // int_0^20 (p^2/K_T - 1) dp at T = 1e-6 resolves the width-T Fermi feature
  const double mu = 1.0, T = 1e-6;
  auto f = [&](double p) {
    const double xi = std::fma(p, p, -mu);
    const double K = std::abs(xi / (2 * T)) < 1e-6 ? 2 * T : xi / std::tanh(xi / (2 * T));
    return p * p / K - 1.0;
  };
  RadialGrid g = build_fermi_adapted_grid(mu, 20.0, 1e-6, 6, 16);
  const double got = g.integrate_fn(f);
  const double want = oracle::integrate_pieces(
      f, {0.0, 1.0 - 1e-3, 1.0 - 1e-6, 1.0 + 1e-6, 1.0 + 1e-3, 2.0, 20.0}, 1e-12);
  CHECK(got == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("grid without a fermi panel (mu <= 0)") {
  RadialGrid g = build_fermi_adapted_grid(-0.5, 10.0, 1e-2, 4, 12);
  const double ip2 = g.integrate_fn([](double p) { return p * p; });
  CHECK(ip2 == doctest::Approx(1000.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("spherical bessel: pinned values") {
  CHECK(spherical_bessel_j(0, 0.0) == doctest::Approx(1.0));
  CHECK(spherical_bessel_j(0, M_PI) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(spherical_bessel_j(1, 0.0) == 0.0);
  // j_1(x) = sin x / x^2 - cos x / x at x = 2.5
  const double x = 2.5;
  CHECK(spherical_bessel_j(1, x) ==
        doctest::Approx(std::sin(x) / (x * x) - std::cos(x) / x).epsilon(1e-14));
}

TEST_CASE("spherical bessel: sum rule sum_l (2l+1) j_l^2 = 1") {
  for (double x : {0.1, 1.0, 5.0, 20.0}) {
    const int lmax = static_cast<int>(x) + 60;
    auto j = spherical_bessel_j_array(lmax, x);
    double s = 0.0;
    for (int l = 0; l <= lmax; ++l) s += (2.0 * l + 1.0) * j[l] * j[l];
    CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("spherical bessel: series vs recurrence on the overlap window") {
  // the series is valid for x^2 < 0.81(2l+3); the array path uses recurrences
  for (int ell : {4, 9, 16, 32}) {
    for (double frac : {0.3, 0.6, 0.85}) {
      const double x = frac * 0.9 * std::sqrt(2.0 * ell + 3.0);
      auto j = spherical_bessel_j_array(ell, x);
      const double scalar = spherical_bessel_j(ell, x);
      if (std::abs(scalar) > 1e-280)
        CHECK(j[ell] == doctest::Approx(scalar).epsilon(1e-12));
    }
  }
}

TEST_CASE("spherical bessel: large order and argument") {
  // j_l(x) ~ sin(x - l pi/2)/x for x >> l(l+1)/2
  const double x = 1.0e4;
  for (int ell : {0, 7, 33, 64}) {
    const double asym = std::sin(x - ell * M_PI_2) / x;
    CHECK(spherical_bessel_j(ell, x) == doctest::Approx(asym).epsilon(1e-4));
  }
}

TEST_CASE("legendre: pinned values and bounds") {
  CHECK(legendre_p(0, 0.3) == 1.0);
  CHECK(legendre_p(1, 0.3) == doctest::Approx(0.3));
  CHECK(legendre_p(2, 1.0) == doctest::Approx(1.0));
  CHECK(legendre_p(2, 0.5) == doctest::Approx(0.5 * (3 * 0.25 - 1)).epsilon(1e-15));
  // |P_l| <= 1 on [-1,1]
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double u = U(rng);
    const int ell = k % 24;
    CHECK(std::abs(legendre_p(ell, u)) <= 1.0 + 1e-12);
  }
}
