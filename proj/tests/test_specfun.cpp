#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/jacobi.hpp>
#include <cmath>

#include "doctest.h"
#include "spl/measures.hpp"
#include "spl/specfun.hpp"

using namespace spl;

namespace {

double gk(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-13);
}

// density written out directly, not through measures.cpp
double mu_density(double a, double b, double th) {
  return std::pow(std::sin(th / 2), 2 * a + 1) * std::pow(std::cos(th / 2), 2 * b + 1);
}

}  // namespace

TEST_CASE("jacobi_poly: low degree and endpoint values") {
  CHECK(jacobi_poly(1, {0, 0}, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
  // P_n(1) = binom(n + a, n)
  const double expect = std::tgamma(6.5) / (std::tgamma(6.0) * std::tgamma(1.5));
  CHECK(jacobi_poly(5, {0.5, -0.5}, 1.0) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("jacobi_poly agrees with boost::math::jacobi") {
  for (double a : {-0.9, -0.5, 0.0, 0.5, 2.0})
    for (double b : {-0.9, 0.0, 1.3})
      for (int n : {0, 1, 2, 7, 20})
        for (double u : {-0.97, -0.4, 0.0, 0.33, 0.999}) {
          const double ref = boost::math::jacobi(static_cast<unsigned>(n), a, b, u);
          CHECK(jacobi_poly(n, {a, b}, u) == doctest::Approx(ref).epsilon(1e-11).scale(1.0));
        }
}

TEST_CASE("jacobi_poly_deriv matches finite differences") {
  const JacobiParams p{0.3, -0.6};
  for (int n : {1, 4, 9}) {
    const double u = 0.21, h = 1e-5;
    const double fd1 = (jacobi_poly(n, p, u + h) - jacobi_poly(n, p, u - h)) / (2 * h);
    const double fd2 = (jacobi_poly(n, p, u + h) - 2 * jacobi_poly(n, p, u) + jacobi_poly(n, p, u - h)) / (h * h);
    CHECK(jacobi_poly_deriv(n, p, u, 1) == doctest::Approx(fd1).epsilon(1e-7));
    CHECK(jacobi_poly_deriv(n, p, u, 2) == doctest::Approx(fd2).epsilon(1e-4));
  }
}

TEST_CASE("Chebyshev case: constant and cosine eigenfunctions") {
  const auto s = SettingId::jacobi_pol(-0.5, -0.5);
  CHECK(eigfun(s, 0, 0.7) == doctest::Approx(1 / std::sqrt(kPi)).epsilon(1e-13));
  for (int n : {1, 2, 5}) {
    // |phi_n| peaks at sqrt(2/pi)
    CHECK(std::fabs(eigfun(s, n, 0.0 + 1e-9)) == doctest::Approx(std::sqrt(2 / kPi)).epsilon(1e-8));
  }
  CHECK(eigfun(s, 2, kPi / 3) == doctest::Approx(std::sqrt(2 / kPi) * std::cos(2 * kPi / 3)).epsilon(1e-13));
}

TEST_CASE("eigenvalues") {
  CHECK(eigenvalue(SettingId::jacobi_pol(0, 0), 0) == doctest::Approx(0.25));
  CHECK(eigenvalue(SettingId::jacobi_pol(0.5, 1.0), 3) == doctest::Approx(std::pow(3 + 1.25, 2)));
  CHECK(eigenvalue(SettingId::fb_natural(0.5), 2) == doctest::Approx(4 * kPi * kPi).epsilon(1e-12));
  CHECK(eigenvalue(SettingId::jacobi_fun(0.2, 0.1), 2) == eigenvalue(SettingId::jacobi_pol(0.2, 0.1), 2));
}

TEST_CASE("eigenfunctions solve the eigen-equation") {
  for (auto s : {SettingId::jacobi_pol(0.4, -0.3), SettingId::jacobi_fun(-0.7, 0.5), SettingId::jacobi_scaled(0.1, 1.2),
                 SettingId::fb_natural(0.3), SettingId::fb_lebesgue(-0.4)}) {
    const double L = s.length();
    for (int n = s.origin(); n < s.origin() + 5; ++n)
      for (double x : {0.13 * L, 0.5 * L, 0.91 * L}) {
        const auto d = eigfun_derivs(s, n, x);
        CHECK(d.f == doctest::Approx(eigfun(s, n, x)).epsilon(1e-12));
        CHECK(apply_operator(s, x, d) == doctest::Approx(eigenvalue(s, n) * d.f).epsilon(1e-8).scale(1.0));
      }
  }
}

TEST_CASE("orthonormality against an independent quadrature") {
  const auto s = SettingId::jacobi_pol(0.5, -0.3);
  for (int n = 0; n < 4; ++n)
    for (int m = n; m < 4; ++m) {
      const double g = gk([&](double th) { return eigfun(s, n, th) * eigfun(s, m, th) * mu_density(0.5, -0.3, th); }, 0,
                          kPi);
      CHECK(g == doctest::Approx(n == m ? 1.0 : 0.0).epsilon(1e-9).scale(1.0));
    }
  // FB natural, nu = 1/2: int_0^1 phi_1^2 x^2 dx = 1
  const auto fb = SettingId::fb_natural(0.5);
  const double g = gk([&](double x) { return std::pow(eigfun(fb, 1, x), 2) * x * x; }, 0, 1);
  CHECK(g == doctest::Approx(1.0).epsilon(1e-10));
  // FB Lebesgue, nu = 0
  const auto fl = SettingId::fb_lebesgue(0.0);
  const double h = gk([&](double x) { return eigfun(fl, 2, x) * eigfun(fl, 3, x); }, 0, 1);
  CHECK(std::fabs(h) < 1e-9);
}

TEST_CASE("bessel_j: closed forms and boost oracle") {
  CHECK(std::fabs(bessel_j(0.5, kPi)) < 1e-15);
  for (double x : {0.01, 0.7, 3.0, 11.5}) {
    CHECK(bessel_j(0.5, x) == doctest::Approx(std::sqrt(2 / (kPi * x)) * std::sin(x)).epsilon(1e-13));
    CHECK(bessel_j(-0.5, x) == doctest::Approx(std::sqrt(2 / (kPi * x)) * std::cos(x)).epsilon(1e-13));
  }
  CHECK(std::fabs(bessel_j(0.0, 2.404825557695773)) < 1e-10);
  for (double nu : {-0.9, -0.3, 0.0, 1.0, 2.7, 10.0})
    for (double x : {1e-3, 0.5, 4.2, 19.0, 35.0, 80.0, 250.0}) {
      const double ref = boost::math::cyl_bessel_j(nu, x);
      CHECK(bessel_j(nu, x) == doctest::Approx(ref).epsilon(1e-11).scale(1e-3));
    }
}

TEST_CASE("bessel zeros") {
  for (int k = 1; k <= 20; ++k) CHECK(bessel_zero(BesselOrder{0.5}, k) == doctest::Approx(k * kPi).epsilon(1e-14));
  CHECK(bessel_zero(BesselOrder{0.0}, 1) == doctest::Approx(2.404825557695773).epsilon(1e-14));
  for (double nu : {-0.9, 0.0, 2.7}) {
    const auto z = bessel_zeros(BesselOrder{nu}, 30);
    for (int k = 0; k < 30; ++k) {
      CHECK(z[k] == doctest::Approx(boost::math::cyl_bessel_j_zero(nu, k + 1)).epsilon(1e-12));
      if (k > 0) CHECK(z[k] > z[k - 1]);
      CHECK(z[k] == doctest::Approx(bessel_zero(BesselOrder{nu}, k + 1)).epsilon(1e-15));
    }
  }
}

TEST_CASE("FB eigenfunctions next to x = 1") {
  // J_nu(s - h) = h J_{nu+1}(s) - h^2 J_{nu+1}(s) / (2 s) + O(h^3) at a zero s;
  // x = 1 - dr itself would round away most of these digits
  for (double nu : {-0.7, 0.0, 2.7})
    for (int n : {1, 50, 900}) {
      const auto s = SettingId::fb_natural(nu);
      const double z = sqrt_eigenvalue(s, n), dr = 1e-9, h = z * dr;
      const double jn1 = boost::math::cyl_bessel_j(nu + 1, z);
      const double expect = std::sqrt(2.0) / std::fabs(jn1) * std::pow(1 - dr, -nu) * jn1 * (h - h * h / (2 * z));
      CHECK(eigfun_lr(s, n, 1 - dr, dr) == doctest::Approx(expect).epsilon(1e-12));
    }
  // across the switch to the series near the zero
  const auto s = SettingId::fb_natural(1.3);
  for (int n : {3, 40})
    for (double h : {3.9, 4.1}) {
      const double z = sqrt_eigenvalue(s, n), dr = h / z;
      const double ref = std::sqrt(2.0) / std::fabs(boost::math::cyl_bessel_j(2.3, z)) * std::pow(1 - dr, -1.3) *
                         boost::math::cyl_bessel_j(1.3, z * (1 - dr));
      CHECK(eigfun_lr(s, n, 1 - dr, dr) == doctest::Approx(ref).epsilon(1e-11));
    }
}

TEST_CASE("bessel_i_scaled against boost") {
  for (double a : {-0.5, 0.0, 0.7, 3.0})
    for (double z : {0.0, 0.1, 2.0, 40.0, 400.0}) {
      const double ref = z == 0 ? (a == 0 ? 1.0 : 0.0) : std::exp(-z) * boost::math::cyl_bessel_i(a, z);
      if (z == 0 && a < 0) continue;
      CHECK(bessel_i_scaled(a, z) == doctest::Approx(ref).epsilon(1e-11).scale(1e-300));
    }
}

TEST_CASE("parameter errors") {
  CHECK_THROWS_AS(eigfun(SettingId::jacobi_pol(-1.2, 0), 0, 1.0), ParameterError);
  CHECK_THROWS_AS(eigfun(SettingId::fb_natural(0.0), 0, 0.5), ParameterError);
  CHECK_THROWS_AS(bessel_zero(BesselOrder{0.0}, 0), ParameterError);
}
