#include "heat_model.hpp"

#include <cmath>

#include "spl/specfun.hpp"

namespace spl::detail {

HeatGeometry heat_geometry(const SettingId& s) {
  HeatGeometry g;
  g.jacobi = s.is_jacobi();
  g.jp = s.jp;
  g.nu = s.bo.nu;
  switch (s.variant) {
    case Variant::JacobiTrigPol:
      g.weighted = true;
      [[fallthrough]];
    case Variant::JacobiTrigFun:
      g.L = kPi;
      g.a = s.jp.alpha;
      g.b = s.jp.beta;
      break;
    case Variant::JacobiScaled:
      g.L = 1.0;
      g.a = s.jp.alpha;
      g.b = s.jp.beta;
      break;
    case Variant::FBNatural:
      g.weighted = true;
      [[fallthrough]];
    case Variant::FBLebesgue:
      g.L = 1.0;
      g.a = s.bo.nu;
      g.b = 0.5;
      break;
  }
  return g;
}

double hankel_factor(double c, double z) {
  if (c == 0.5) return -std::expm1(-2 * z);
  if (c == -0.5) return 1 + std::exp(-2 * z);
  return std::sqrt(2 * kPi * z) * bessel_i_scaled(c, z);
}

double model_weight(const HeatGeometry& g, Pt x, Pt y) {
  if (!g.weighted) return 1.0;
  if (g.jacobi) {
    const double e1 = -(g.jp.alpha + 0.5), e2 = -(g.jp.beta + 0.5);
    return std::pow(std::sin(0.5 * x.l) * std::sin(0.5 * y.l), e1) *
           std::pow(std::sin(0.5 * x.r) * std::sin(0.5 * y.r), e2);
  }
  return std::pow(x.l * y.l, -(g.nu + 0.5));
}

double heat_model(const HeatGeometry& g, double u, Pt x, Pt y, double d) {
  const double gauss = std::exp(-d * d / (4 * u)) / std::sqrt(4 * kPi * u);
  if (gauss == 0.0) return 0.0;
  const double za = x.l * y.l / (2 * u);
  const double zb = x.r * y.r / (2 * u);
  return gauss * hankel_factor(g.a, za) * hankel_factor(g.b, zb) * model_weight(g, x, y);
}

}  // namespace spl::detail
