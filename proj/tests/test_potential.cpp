#include <doctest.h>

#include <cmath>
#include <fstream>

#include "bcs/errors.hpp"
#include "bcs/potential.hpp"
#include "bcs/quadrature.hpp"
#include "support/adaptive.hpp"

using namespace bcs;

namespace {
RadialGrid test_grid() { return build_fermi_adapted_grid(1.0, 20.0, 0.1, 2, 8); }
constexpr double kInv2Pi32 = 0.0634936359342409697;
}  // namespace

TEST_CASE("gaussian Fourier transform: closed form vs quadrature") {
  auto V = RadialPotential::gaussian(5.0, 1.0);
  // mpmath: Vhat(1.7) = -1.1787303827793176539
  CHECK(V.fourier_transform(1.7) == doctest::Approx(-1.1787303827793177).epsilon(1e-13));
  for (double p : {0.0, 0.4, 2.3, 8.0}) {
    const double closed = V.fourier_transform(p);
    const double quad =
        kInv2Pi32 * 4.0 * M_PI *
        oracle::integrate([&](double r) {
          const double j0 = p * r < 1e-8 ? 1.0 : std::sin(p * r) / (p * r);
          return r * r * V(r) * j0;
        }, 0.0, 16.0, 1e-14);
    CHECK(closed == doctest::Approx(quad).epsilon(1e-12));
  }
}

TEST_CASE("Vhat(0) equals (2pi)^{-3/2} int V dx for every family") {
  auto gauss = RadialPotential::gaussian(5.0, 1.0);
  auto well = RadialPotential::square_well(1.0, 1.0);
  auto expo = RadialPotential::exponential(2.0, 0.7);
  for (const auto* V : {&gauss, &well, &expo})
    CHECK(V->fourier_transform(0.0) ==
          doctest::Approx(kInv2Pi32 * V->integral_3d()).epsilon(1e-13));
  // square well (v=1, R=1) at p=0: -(2pi)^{-3/2} (4pi/3)
  CHECK(well.fourier_transform(0.0) ==
        doctest::Approx(-kInv2Pi32 * 4.0 * M_PI / 3.0).epsilon(1e-14));
}

TEST_CASE("scaled coupling multiplies V and Vhat") {
  auto V = RadialPotential::gaussian(5.0, 1.0);
  auto W = V.scaled(0.25);
  CHECK(W(0.7) == doctest::Approx(0.25 * V(0.7)));
  CHECK(W.fourier_transform(1.1) == doctest::Approx(0.25 * V.fourier_transform(1.1)));
  CHECK_THROWS_AS(V.scaled(-1.0), std::invalid_argument);
}

TEST_CASE("modified spherical bessel i_l, scaled") {
  auto i1 = [](double x) {
    const double e2 = std::exp(-2.0 * x);
    return (x * (1.0 + e2) / 2.0 - (1.0 - e2) / 2.0) / (x * x);
  };
  for (double x : {0.3, 2.0, 5.0, 40.0, 300.0}) {
    CHECK(modified_bessel_i_scaled(0, x) ==
          doctest::Approx((1.0 - std::exp(-2.0 * x)) / (2.0 * x)).epsilon(1e-14));
    CHECK(modified_bessel_i_scaled(1, x) == doctest::Approx(i1(x)).epsilon(1e-13));
  }
  CHECK(modified_bessel_i_scaled(0, 0.0) == 1.0);
  CHECK(modified_bessel_i_scaled(3, 0.0) == 0.0);
}

TEST_CASE("channel kernel: trivial anchors") {
  auto V = RadialPotential::gaussian(5.0, 1.0);
  // l=0, p=q=0: (2/pi) int r^2 V dr = (1/2pi^2) int V dx
  const double want = V.integral_3d() / (2.0 * M_PI * M_PI);
  CHECK(kernel_value_position(V, 0, 0.0, 0.0) == doctest::Approx(want).epsilon(1e-12));
  CHECK(kernel_value_momentum(V, 0, 0.0, 0.0) == doctest::Approx(want).epsilon(1e-12));
  // l=2 at p=0: j_2(0) = 0
  CHECK(kernel_value_position(V, 2, 0.0, 1.3) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(kernel_value_momentum(V, 2, 0.0, 1.3) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("square well l=0 kernel at p=q=1 vs adaptive quadrature and closed form") {
  auto V = RadialPotential::square_well(1.0, 1.0);
  // (2/pi) int_0^1 r^2 (-1) j0(r)^2 dr = -(2/pi)(1/2 - sin(2)/4)
  const double closed = -(2.0 / M_PI) * (0.5 - std::sin(2.0) / 4.0);
  CHECK(closed == doctest::Approx(-0.17359070596374243802).epsilon(1e-14));
  const double adaptive = (2.0 / M_PI) * oracle::integrate([&](double r) {
                            const double j0 = r < 1e-8 ? 1.0 : std::sin(r) / r;
                            return r * r * V(r) * j0 * j0;
                          }, 0.0, 1.0, 1e-14);
  CHECK(kernel_value_position(V, 0, 1.0, 1.0) == doctest::Approx(adaptive).epsilon(1e-10));
  CHECK(kernel_value_position(V, 0, 1.0, 1.0) == doctest::Approx(closed).epsilon(1e-10));
  CHECK(kernel_value_momentum(V, 0, 1.0, 1.0) == doctest::Approx(closed).epsilon(1e-9));
}

TEST_CASE("cross-representation agreement on a grid, l in {0,1,2}, all families") {
  auto gauss = RadialPotential::gaussian(5.0, 1.0);
  auto well = RadialPotential::square_well(1.0, 1.0);
  auto expo = RadialPotential::exponential(2.0, 0.7);
  RadialGrid g = test_grid();
  for (const auto* V : {&gauss, &well, &expo}) {
    for (int ell : {0, 1, 2}) {
      ChannelKernel a = channel_kernel_position(*V, ell, g);
      ChannelKernel b = channel_kernel_momentum(*V, ell, g);
      const double diff = (a.matrix - b.matrix).cwiseAbs().maxCoeff();
      CHECK(diff <= 1e-8);
      // symmetry
      CHECK((a.matrix - a.matrix.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("positive diagonal for repulsive V at l=0") {
  auto V = RadialPotential::gaussian(-2.0, 1.0);  // repulsive: V >= 0
  RadialGrid g = test_grid();
  ChannelKernel k = channel_kernel(V, 0, g);
  for (int i = 0; i < k.matrix.rows(); ++i) CHECK(k.matrix(i, i) >= 0.0);
}

TEST_CASE("kernel trace identity via the Bessel sum rule") {
  // sum_l (2l+1) K_l(pf,pf) -> (1/2pi^2) int V dx  (gaussian v=5, s=1, mu=1)
  auto V = RadialPotential::gaussian(5.0, 1.0);
  const double pf = 1.0;
  double s = 0.0;
  for (int ell = 0; ell <= 40; ++ell)
    s += (2.0 * ell + 1.0) * kernel_value(V, ell, pf, pf);
  const double target = V.integral_3d() / (2.0 * M_PI * M_PI);
  CHECK(target == doctest::Approx(-3.9894228040143268).epsilon(1e-13));
  CHECK(s == doctest::Approx(target).epsilon(1e-6));
}

TEST_CASE("tabulated potential reproduces its closed-form parent") {
  // dense gaussian table
  std::vector<double> r, v;
  auto G = RadialPotential::gaussian(5.0, 1.0);
  for (int i = 0; i <= 1200; ++i) {
    r.push_back(13.0 * i / 1200.0 + 1e-6);
    v.push_back(G(r.back()));
  }
  auto T = RadialPotential::tabulated(r, v);
  CHECK(T.fourier_transform(1.0) == doctest::Approx(G.fourier_transform(1.0)).epsilon(1e-6));
  CHECK(kernel_value(T, 0, 1.0, 1.0) ==
        doctest::Approx(kernel_value(G, 0, 1.0, 1.0)).epsilon(1e-6));
}

TEST_CASE("tabulated potential: input validation") {
  std::vector<double> r{0.0, 1.0, 2.0}, bad{1.0, 0.5, 0.4};  // tail too large
  CHECK_THROWS_AS(RadialPotential::tabulated(r, bad), std::invalid_argument);
  std::vector<double> nonmono{0.0, 2.0, 1.0}, v{1.0, 0.5, 0.0};
  CHECK_THROWS_AS(RadialPotential::tabulated(nonmono, v), std::invalid_argument);
}

TEST_CASE("tabulated file loader skips comments") {
  const std::string path = "test_pot.txt";
  {
    std::ofstream out(path);
    out << "# r V(r)\n";
    for (int i = 0; i <= 400; ++i) {
      const double r = 0.01 + 8.0 * i / 400.0;
      out << r << " " << -std::exp(-r * r / 2.0) << "\n";
    }
  }
  auto V = RadialPotential::from_file(path);
  CHECK(V(1.0) == doctest::Approx(-std::exp(-0.5)).epsilon(1e-4));
  std::remove(path.c_str());
}
