#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "spl/envelopes.hpp"
#include "spl/specfun.hpp"

using namespace spl;

TEST_CASE("j_gamma_quad against antiderivatives") {
  for (double w : {0.01, 0.3, 2.0})
    for (auto [T, S] : {std::pair{0.0, 1.0}, {0.2, 5.0}, {1e-4, 300.0}}) {
      const double at = (std::atan(S / w) - std::atan(T / w)) / w;
      CHECK(j_gamma_quad({0.0, T, S, w, 2.0}) == doctest::Approx(at).epsilon(1e-9));
      const double lg = 0.5 * std::log((S * S + w * w) / (T * T + w * w));
      CHECK(j_gamma_quad({1.0, T, S, w, 2.0}) == doctest::Approx(lg).epsilon(1e-9));
      // gamma = -1: (log t - log(t^2 + w^2) / 2) / w^2
      if (T > 0) {
        auto F = [w](double t) { return (std::log(t) - 0.5 * std::log(t * t + w * w)) / (w * w); };
        CHECK(j_gamma_quad({-1.0, T, S, w, 2.0}) == doctest::Approx(F(S) - F(T)).epsilon(1e-9));
      }
    }
  CHECK(j_gamma_quad({0.7, 0.5, 0.5, 0.1, 1.0}) == 0.0);
}

TEST_CASE("j_gamma_closed branches") {
  CHECK(j_gamma_closed({0.0, 0.0, 1.0, 0.1, 1.0}) == doctest::Approx(10.0));
  CHECK(j_gamma_closed({2.0, 0.3, 0.3, 0.1, 1.0}) == 0.0);
  CHECK_THROWS_AS(j_gamma_closed({-1.0, 0.0, 1.0, 0.1, 1.0}), DomainError);
  CHECK_THROWS_AS(j_gamma_closed({0.0, 0.0, 1.0, 2.0, 1.0}), ParameterError);
  // gamma = 1 with S / (T v w) = 2: the log+ term is active
  CHECK(j_gamma_closed({1.0, 0.5, 1.0, 0.1, 1.0}) == doctest::Approx(0.5 * (1 + std::log(2.0))));
  // bounded ratio on a few hand-picked tuples from every branch
  for (double g : {-2.5, -1.0, -0.3, 0.7, 1.0, 2.0})
    for (auto [T, S, w] : {std::tuple{0.01, 1.0, 0.5}, {0.3, 40.0, 1e-3}, {2.0, 3.0, 1.0}}) {
      const JGammaArgs a{g, T, S, w, 1.0};
      const double r = j_gamma_closed(a) / j_gamma_quad(a);
      CHECK(r > 1.0 / 50);
      CHECK(r < 50);
    }
}

TEST_CASE("power_diff_envelope") {
  CHECK(power_diff_envelope(0.5, 2.0, 2.0) == 0.0);
  CHECK_THROWS_AS(power_diff_envelope(0.0, 1.0, 2.0), DomainError);
  for (double A : {0.1, 0.7, 3.0, 10.0})
    for (double B : {0.1, 1.3, 9.0}) {
      if (A == B) continue;
      CHECK(power_diff_envelope(1.0, A, B) == doctest::Approx(std::fabs(A - B)));
      const double r2 = std::fabs(A * A - B * B) / power_diff_envelope(2.0, A, B);
      CHECK(r2 >= 1.0 - 1e-14);
      CHECK(r2 <= 2.0 + 1e-14);
    }
  double lo = 1e300, hi = 0;
  for (double xi : {-2.0, -0.5, 0.5, 1.0, 3.0})
    for (double A = 1e-3; A < 1e3; A *= 3.7)
      for (double B = 1.3e-3; B < 1e3; B *= 2.9) {
        const double r = std::fabs(std::pow(A, xi) - std::pow(B, xi)) / power_diff_envelope(xi, A, B);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
  CHECK(lo >= 0.25);
  CHECK(hi <= 4.0);
}

TEST_CASE("poisson_envelope values") {
  const auto cheb = SettingId::jacobi_pol(-0.5, -0.5);
  CHECK(poisson_envelope(cheb, 5.0, 1.0, 2.0, 2.0) == 1.0);
  const double t = 0.1;
  CHECK(poisson_envelope(SettingId::fb_natural(0.5), t, 0.5, 0.5, 2.0) ==
        doctest::Approx(0.25 * std::pow(t + 1, -4) / t).epsilon(1e-14));
  CHECK_THROWS_AS(poisson_envelope(cheb, 0.0, 1.0, 2.0, 2.0), DomainError);
  CHECK_THROWS_AS(poisson_envelope(cheb, 1.0, 0.0, 2.0, 2.0), DomainError);
}

TEST_CASE("potential_envelope: literal formula") {
  // sigma = alpha + 1 = beta + 1 switches on both log terms
  const auto s = SettingId::jacobi_pol(0, 0);
  CHECK(potential_envelope(s, 1.0, 1.0, 1.0) ==
        doctest::Approx(2 + std::log(kPi) + std::log(kPi / (kPi - 1))).epsilon(1e-14));
  CHECK(potential_envelope(SettingId::jacobi_pol(0.2, 0.3), 1.0, 1.0, 1.0) == doctest::Approx(1 + std::pow(2.0, -0.4) * std::pow(2 * kPi - 2, -0.6)));
  CHECK(std::isinf(potential_envelope(s, 0.5, 1.0, 1.0)));
  CHECK(std::isinf(potential_envelope(s, 0.2, 1.0, 1.0)));
  // alpha = 0.5, sigma = 1.5: the log(2 pi / (theta + phi)) term
  const auto t = SettingId::jacobi_pol(0.5, 0.0);
  const double on = potential_envelope(t, 1.5, 0.3, 0.5), off = potential_envelope(t, 1.5 + 1e-9, 0.3, 0.5);
  CHECK(on - off == doctest::Approx(std::log(2 * kPi / 0.8)).epsilon(1e-6));
  CHECK(near_activation(t, 1.5 + 1e-8));
  CHECK_FALSE(near_activation(t, 1.5));
  CHECK_FALSE(near_activation(t, 1.4));
}

TEST_CASE("kernel components") {
  const JacobiParams p{0.3, -0.4};
  CHECK(kernel_component(KernelFamily::JacobiPol, 1, p, 0.3, 0.2, 1.9) == 1.0);
  for (double d : {0.1, 1.0})
    CHECK(kernel_component(KernelFamily::JacobiFun, 6, {-0.5, -0.5}, 0.3, 1.0, 1.0 + d) ==
          doctest::Approx(std::pow(d, -0.4)).epsilon(1e-14));
  CHECK_THROWS_AS(kernel_component(KernelFamily::JacobiPol, 7, p, 0.3, 0.2, 1.9), IndexError);
  // sum of the components against the envelope
  for (auto fam : {KernelFamily::JacobiPol, KernelFamily::JacobiFun})
    for (double sigma : {0.3, 0.5, 0.6, 1.3, 2.0}) {
      const auto s = fam == KernelFamily::JacobiPol ? SettingId::jacobi_pol(p.alpha, p.beta)
                                                    : SettingId::jacobi_fun(p.alpha, p.beta);
      double lo = 1e300, hi = 0;
      for (double th : {1e-4, 0.02, 1.0, 2.5, kPi - 1e-3})
        for (double ph : {3e-4, 0.5, 1.7, kPi - 1e-5}) {
          double sum = 0;
          for (int i = 1; i <= 6; ++i) sum += kernel_component(fam, i, p, sigma, th, ph);
          const double r = sum / potential_envelope(s, sigma, th, ph);
          lo = std::min(lo, r);
          hi = std::max(hi, r);
        }
      CHECK(lo >= 1.0 / 8);
      CHECK(hi <= 8.0);
    }
}

TEST_CASE("U_xi kernel") {
  // flat measure: the ball is an interval of length 2r
  for (double xi : {0.2, 1.0}) CHECK(u_xi_kernel({-0.5, -0.5}, xi, 1.5, 1.7) == doctest::Approx(std::pow(0.2, xi - 1) / 2));
  CHECK_THROWS_AS(u_xi_kernel({0, 0}, 0.5, 1.0, 1.0), SingularityError);
  // comparable with the sixth component at xi = 2 sigma
  const JacobiParams p{0.5, 0.0};
  double lo = 1e300, hi = 0;
  for (double th : {0.01, 0.4, 1.5, 3.0})
    for (double ph : {0.02, 0.9, 2.2, 3.1}) {
      const double r = u_xi_kernel(p, 0.6, th, ph) / kernel_component(KernelFamily::JacobiPol, 6, p, 0.3, th, ph);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  CHECK(hi / lo < 100);
}

TEST_CASE("small envelope bands") {
  PoissonBandSpec ps;
  ps.setting = SettingId::jacobi_pol(0.5, -0.3);
  ps.ts = log_space(0.01, 8, 5);
  ps.grid = 10;
  const auto b = poisson_band(ps);
  CHECK(b.ok());
  CHECK(b.sample_count == 5 * 55);  // symmetric kernel: pairs with j >= i
  CHECK(b.spread() < 1e3);

  PotentialBandSpec qs;
  qs.potential.setting = SettingId::fb_natural(0.0);
  qs.potential.sigma = 0.4;
  qs.grid = 8;
  const auto c = potential_band(qs);
  CHECK(c.ok());
  CHECK(c.spread() < 1e3);
}

TEST_CASE("first-term threshold") {
  // Chebyshev: the error of the first term is about 2 exp(-t) near the endpoints
  const auto s = SettingId::jacobi_pol(-0.5, -0.5);
  const double rel = 1e-3, t = first_term_threshold(s, rel);
  CHECK(t >= std::log(2 / rel) * 0.95);
  CHECK(t <= std::log(2 / rel) * 1.2);
  CHECK_THROWS_AS(first_term_threshold(s, 1e-30, 6, 0.05, 1.0), ResolutionError);
}
