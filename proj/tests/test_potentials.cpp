#include <cmath>

#include "doctest.h"
#include "spl/measures.hpp"
#include "spl/potentials.hpp"
#include "spl/specfun.hpp"

using namespace spl;

namespace {

// plain truncated eigen-expansion; for sigma = 1.5 the tail past N is O(N^{-2})
double eigen_sum(const PotentialSpec& ps, double x, double y, int N) {
  const auto es = eigensystem(ps.setting, N);
  const auto vx = es->values(x, N), vy = es->values(y, N);
  const double shift = ps.variant == PotentialVariant::Bessel ? 1.0 : 0.0;
  double s = 0;
  for (int k = N - 1; k >= 0; --k) s += std::pow(shift + es->eig(k), -ps.sigma) * vx[k] * vy[k];
  return s;
}

PotentialSpec make(SettingId s, double sigma, PotentialVariant v = PotentialVariant::Riesz) {
  PotentialSpec p;
  p.setting = s;
  p.sigma = sigma;
  p.variant = v;
  return p;
}

}  // namespace

TEST_CASE("potential kernel matches the eigen-expansion for sigma > 1") {
  for (auto s : {SettingId::jacobi_pol(0.3, -0.2), SettingId::jacobi_fun(-0.6, 0.4), SettingId::jacobi_scaled(0.0, 0.5),
                 SettingId::fb_natural(0.2), SettingId::fb_lebesgue(1.1)})
    for (auto v : {PotentialVariant::Riesz, PotentialVariant::Bessel}) {
      const auto ps = make(s, 1.5, v);
      const double L = s.length(), x = 0.27 * L, y = 0.64 * L;
      const double ref = eigen_sum(ps, x, y, 6000);
      const auto kv = potential_kernel(ps, x, y, 1e-10);
      CHECK(kv.value == doctest::Approx(ref).epsilon(2e-6));
    }
}

TEST_CASE("first coefficients from the kernel by projection") {
  // int K(x, y) phi_n(y) dmu(y) = lambda_n^{-sigma} phi_n(x)
  const auto s = SettingId::jacobi_pol(0.5, 0.0);
  const auto ps = make(s, 0.75);
  const double x = 1.1;
  for (int n : {0, 1, 3}) {
    const auto r = apply_potential(ps, [&](double y) { return eigfun(s, n, y); }, std::vector<double>{x}, 1e-10);
    CHECK(r.value[0] == doctest::Approx(std::pow(eigenvalue(s, n), -0.75) * eigfun(s, n, x)).epsilon(1e-4));
  }
}

TEST_CASE("Bessel variant at alpha + beta = -1") {
  const auto s = SettingId::jacobi_pol(-0.5, -0.5);
  CHECK_THROWS_AS(potential_kernel(make(s, 0.75), 1.0, 2.0, 1e-10), ParameterError);
  const auto ps = make(s, 1.5, PotentialVariant::Bessel);
  CHECK(potential_kernel(ps, 1.0, 2.0, 1e-10).value == doctest::Approx(eigen_sum(ps, 1.0, 2.0, 6000)).epsilon(2e-6));
}

TEST_CASE("diagonal behaviour") {
  const auto s = SettingId::jacobi_fun(0.0, 0.0);
  CHECK_THROWS_AS(potential_kernel(make(s, 0.5), 1.0, 1.0, 1e-10), SingularityError);
  CHECK_THROWS_AS(potential_kernel(make(s, 0.3), 1.0, 1.0, 1e-10), SingularityError);
  // finite for sigma > 1/2, and the off-diagonal values approach it
  const auto ps = make(s, 0.8);
  const double d = potential_kernel(ps, 1.0, 1.0, 1e-10).value;
  CHECK(std::isfinite(d));
  CHECK(potential_kernel(ps, 1.0, 1.0 + 1e-7, 1e-10).value == doctest::Approx(d).epsilon(1e-3));
  // log growth at sigma = 1/2: K(x, x + h) - K(x, x + 2h) ~ c log 2 for small h
  const auto ph = make(s, 0.5);
  const double a = potential_kernel(ph, 1.0, 1.0 + 1e-6, 1e-10).value;
  const double b = potential_kernel(ph, 1.0, 1.0 + 2e-6, 1e-10).value;
  const double c = potential_kernel(ph, 1.0, 1.0 + 4e-6, 1e-10).value;
  CHECK((a - b) == doctest::Approx(b - c).epsilon(1e-3));
}

TEST_CASE("symmetry and positivity") {
  for (auto s : {SettingId::jacobi_pol(1.0, -0.5), SettingId::fb_natural(-0.5)}) {
    const auto ps = make(s, 0.4);
    const double L = s.length();
    const double a = potential_kernel(ps, 0.1 * L, 0.9 * L, 1e-10).value;
    CHECK(a == doctest::Approx(potential_kernel(ps, 0.9 * L, 0.1 * L, 1e-10).value).epsilon(1e-10));
    CHECK(a > 0);
  }
}
