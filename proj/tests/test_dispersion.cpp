#include <doctest.h>

#include <cmath>

#include "bcs/dispersion.hpp"

using namespace bcs;

TEST_CASE("K_T: removable singularity, closed forms, T = 0 branch") {
  ThermoPoint pt{0.3, 1.0};
  CHECK(k_T(1.0, pt) == doctest::Approx(0.6).epsilon(1e-14));  // 2T at p^2 = mu

  // mu=1, T=0.5, p^2=2 -> 1/tanh(1)   (mpmath: 1.3130352854993313036)
  ThermoPoint pt2{0.5, 1.0};
  CHECK(k_T(std::sqrt(2.0), pt2) == doctest::Approx(1.3130352854993313).epsilon(1e-14));

  ThermoPoint zero{0.0, 1.0};
  CHECK(k_T(2.0, zero) == doctest::Approx(3.0));  // K_0 = |p^2 - mu|
}

TEST_CASE("K_T >= 2T with equality only on the Fermi sphere; monotone in T") {
  ThermoPoint pt{0.2, 1.5};
  for (double p : {0.0, 0.3, 1.0, 1.2247448713915890, 1.5, 3.0, 10.0}) {
    const double k = k_T(p, pt);
    CHECK(k >= 2.0 * pt.T - 1e-15);
    if (std::abs(p * p - pt.mu) > 1e-6) CHECK(k > 2.0 * pt.T);
    // monotone increasing in T pointwise
    CHECK(k_T(p, ThermoPoint{0.4, 1.5}) >= k - 1e-15);
  }
}

TEST_CASE("E_Delta and K_T^Delta") {
  ThermoPoint pt{0.25, 1.0};
  CHECK(e_delta(2.0, 0.0, pt) == doctest::Approx(3.0));       // zero-gap reduction
  CHECK(e_delta(1.0, 0.2, pt) == doctest::Approx(0.2));       // Fermi-surface value
  CHECK(e_delta(2.0, 4.0, pt) == doctest::Approx(5.0));       // 3-4-5
  CHECK(k_T_delta(1.7, 0.0, pt) == doctest::Approx(k_T(1.7, pt)).epsilon(1e-14));
  // E -> 0 limit gives 2T
  CHECK(k_T_delta(1.0, 0.0, pt) == doctest::Approx(2.0 * pt.T).epsilon(1e-12));
  // T = 0: K_0^Delta = E_Delta
  ThermoPoint z{0.0, 1.0};
  CHECK(k_T_delta(2.0, 4.0, z) == doctest::Approx(5.0));
  // monotone increasing in delta
  double prev = 0.0;
  for (double d : {0.0, 0.1, 0.5, 1.0, 3.0}) {
    const double k = k_T_delta(1.3, d, pt);
    CHECK(k >= prev);
    prev = k;
  }
}

TEST_CASE("m_mu against high-precision quadrature oracle") {
  // mpmath (40 digits), radial convention int_0^inf (p^2/K_T - 1) dp
  CHECK(m_mu({1e-2, 1.0}) == doctest::Approx(4.117118072839975948).epsilon(1e-10));
  CHECK(m_mu({1e-4, 1.0}) == doctest::Approx(8.7222676947643189787).epsilon(1e-10));
  CHECK(m_mu({1e-6, 1.0}) == doctest::Approx(13.327437878696448336).epsilon(1e-10));
}

TEST_CASE("m_mu asymptotics: ln(mu/T) slope and the constant gamma-2+ln(8/pi)") {
  const double c = m_mu({1e-4, 1.0}) - m_mu({1e-3, 1.0});
  CHECK(c == doctest::Approx(std::log(10.0)).epsilon(1e-6));
  const double limit = kEulerGamma - 2.0 + std::log(8.0 / M_PI);  // -0.48807267926803
  CHECK(m_mu({1e-6, 1.0}) - std::log(1e6) == doctest::Approx(limit).epsilon(1e-9));
}

TEST_CASE("m_mu scaling (mu,T) -> (c^2 mu, c^2 T) multiplies by c") {
  const double c = 1.7;
  const double a = m_mu({1e-4, 1.0});
  const double b = m_mu({c * c * 1e-4, c * c * 1.0});
  CHECK(b == doctest::Approx(c * a).epsilon(1e-9));
}

TEST_CASE("m_mu strictly decreasing in T") {
  double prev = 1e300;
  for (double T : {1e-5, 1e-3, 1e-1, 1.0, 10.0}) {
    const double m = m_mu({T, 1.0});
    CHECK(m < prev);
    prev = m;
  }
}

TEST_CASE("g1, g2 against 40-digit oracle") {
  CHECK(g1(5.0) == doctest::Approx(0.03680534925774114959).epsilon(1e-13));
  CHECK(g1(-5.0) == doctest::Approx(-0.03680534925774114959).epsilon(1e-13));
  CHECK(g2(5.0) == doctest::Approx(0.0026236271065290251752).epsilon(1e-13));
  CHECK(g2(-5.0) == doctest::Approx(0.0026236271065290251752).epsilon(1e-13));
  CHECK(g1(0.5) == doctest::Approx(0.039659800808458560834).epsilon(1e-13));
  CHECK(g2(-0.5) == doctest::Approx(0.23022717940928296224).epsilon(1e-13));
  CHECK(g1(2.0) == doctest::Approx(0.085404953585434704681).epsilon(1e-13));
  CHECK(g2(2.0) == doctest::Approx(0.079962501056153062524).epsilon(1e-13));
  CHECK(g1(50.0) == doctest::Approx(4.0e-4).epsilon(1e-13));
  CHECK(g1_over_z(-2.0) == doctest::Approx(0.042702476792717352341).epsilon(1e-13));
  // series window
  CHECK(g1_over_z(1e-3) == doctest::Approx(0.083333316666669196428).epsilon(1e-12));
  CHECK(g2(1e-3) == doctest::Approx(0.249999916666684375).epsilon(1e-12));
  CHECK(g2(0.0) == doctest::Approx(0.25));
  CHECK(g1_over_z(0.0) == doctest::Approx(1.0 / 12.0));
}

TEST_CASE("g1_over_z positive on [-50, 50]") {
  for (int i = 0; i <= 2000; ++i) {
    const double z = -50.0 + 0.05 * i;
    CHECK(g1_over_z(z) > 0.0);
  }
}
