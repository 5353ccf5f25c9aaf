#include "spl/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

#include <quadmath.h>

namespace spl {

namespace {

void check_jacobi(JacobiParams p) {
  if (!(p.alpha > -1.0) || !(p.beta > -1.0))
    throw ParameterError("Jacobi parameters need alpha > -1 and beta > -1");
}

void check_index(const SettingId& s, int n) {
  if (n < s.origin())
    throw IndexError("eigenfunction index " + std::to_string(n) + " is below the index origin of " +
                     s.key());
}

// weight factor (sin t/2)^{a+1/2} (cos t/2)^{b+1/2}
double jacobi_weight(JacobiParams p, double t) {
  return std::pow(std::sin(0.5 * t), p.alpha + 0.5) * std::pow(std::cos(0.5 * t), p.beta + 0.5);
}

double jacobi_c(JacobiParams p, int n) {
  const double a = p.alpha, b = p.beta;
  double lh;
  if (n == 0)
    lh = std::lgamma(a + 1) + std::lgamma(b + 1) - std::lgamma(a + b + 2);
  else
    lh = std::lgamma(n + a + 1) + std::lgamma(n + b + 1) - std::log(2.0 * n + a + b + 1) -
         std::lgamma(n + 1.0) - std::lgamma(n + a + b + 1);
  return std::exp(-0.5 * lh);
}

}  // namespace

double jacobi_poly(int n, JacobiParams p, double u) {
  check_jacobi(p);
  if (n < 0) throw IndexError("Jacobi polynomial degree must be >= 0");
  if (!(u >= -1.0 && u <= 1.0)) throw DomainError("Jacobi polynomial argument must lie in [-1,1]");
  if (n == 0) return 1.0;
  const double a = p.alpha, b = p.beta;
  double pm = 1.0;
  double pc = (a + 1) + 0.5 * (a + b + 2) * (u - 1);
  for (int k = 2; k <= n; ++k) {
    const double c = 2.0 * k + a + b;
    const double num =
        (c - 1) * (c * (c - 2) * u + a * a - b * b) * pc - 2 * (k + a - 1) * (k + b - 1) * c * pm;
    const double den = 2.0 * k * (k + a + b) * (c - 2);
    pm = pc;
    pc = num / den;
  }
  return pc;
}

double jacobi_poly_deriv(int n, JacobiParams p, double u, int k) {
  if (k == 0) return jacobi_poly(n, p, u);
  if (k < 0) throw ParameterError("derivative order must be >= 0");
  check_jacobi(p);
  if (n < k) return 0.0;
  double f = 1.0;
  for (int j = 1; j <= k; ++j) f *= 0.5 * (n + p.alpha + p.beta + j);
  return f * jacobi_poly(n - k, {p.alpha + k, p.beta + k}, u);
}

double jacobi_mass(JacobiParams p) {
  check_jacobi(p);
  return std::exp(std::lgamma(p.alpha + 1) + std::lgamma(p.beta + 1) -
                  std::lgamma(p.alpha + p.beta + 2));
}

// ---------------------------------------------------------------- Bessel J

namespace detail {

double bessel_crossover(double nu) { return std::max(20.0, std::fabs(nu)); }

namespace {
template <class R>
double series_sum(double nu, double x, R lt0) {
  const R h = static_cast<R>(x) / 2;
  R t = lt0;
  R sum = t;
  const R h2 = h * h;
  const R tiny = std::numeric_limits<R>::epsilon() / 100;
  for (int k = 1; k < 2000; ++k) {
    t *= -h2 / (static_cast<R>(k) * (k + static_cast<R>(nu)));
    sum += t;
    const R at = t < 0 ? -t : t;
    const R as = sum < 0 ? -sum : sum;
    if (k > x / 2 && at <= tiny * as) break;
  }
  return static_cast<double>(sum);
}
}  // namespace

double bessel_j_series(double nu, double x) {
  if (x == 0.0) return nu == 0.0 ? 1.0 : (nu > 0 ? 0.0 : std::numeric_limits<double>::infinity());
  // leading term (x/2)^nu / Gamma(nu+1); Gamma(nu+1) > 0 for nu > -1
  if (x <= 12.0) {
    using ld = long double;
    const ld lt0 = std::exp(static_cast<ld>(nu) * std::log(static_cast<ld>(x) / 2) -
                            std::lgamma(static_cast<ld>(nu) + 1));
    return series_sum<ld>(nu, x, lt0);
  }
  // the alternating terms peak near e^x, so carry quad precision here
  const __float128 lt0 = expq(static_cast<__float128>(nu) * logq(static_cast<__float128>(x) / 2) -
                              lgammaq(static_cast<__float128>(nu) + 1));
  return series_sum<__float128>(nu, x, lt0);
}

double bessel_j_hankel(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, P = 1.0, Q = 0.0, last = 1.0;
  bool ok = false;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1;
    term *= (mu - odd * odd) / (8.0 * k * x);
    const double at = std::fabs(term);
    if (at > last && at > 1e-17) break;  // series started diverging
    last = at;
    // a_k / x^k enters P (even k) or Q (odd k) with sign (-1)^{floor(k/2)}
    const double sgn = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0)
      P += sgn * term;
    else
      Q += sgn * term;
    if (at < 1e-17) {
      ok = true;
      break;
    }
    if (term == 0.0) {
      ok = true;
      break;
    }
  }
  if (!ok) return std::numeric_limits<double>::quiet_NaN();
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (P * std::cos(chi) - Q * std::sin(chi));
}

}  // namespace detail

namespace {

double bessel_j_small_order(double nu, double x) {
  if (x <= 20.0) return detail::bessel_j_series(nu, x);
  double v = detail::bessel_j_hankel(nu, x);
  if (std::isnan(v)) v = detail::bessel_j_series(nu, x);
  return v;
}

double bessel_j_impl(double nu, double x) {
  if (x <= detail::bessel_crossover(nu)) return detail::bessel_j_series(nu, x);
  const double h = detail::bessel_j_hankel(nu, x);
  if (!std::isnan(h)) return h;
  // x > |nu| here, so upward recurrence in the order is stable
  const double base = nu - std::floor(nu);
  double jm = bessel_j_small_order(base, x);
  double jc = bessel_j_small_order(base + 1.0, x);
  if (nu == base) return jm;
  for (double m = base + 1.0; m < nu - 0.5; m += 1.0) {
    const double jn = 2.0 * m / x * jc - jm;
    jm = jc;
    jc = jn;
  }
  return jc;
}

}  // namespace

double bessel_j(BesselOrder order, double x) {
  if (!(order.nu > -1.0)) throw ParameterError("Bessel order needs nu > -1");
  if (!(x >= 0.0)) throw DomainError("bessel_j needs x >= 0");
  return bessel_j_impl(order.nu, x);
}

namespace {

double bessel_jp(double nu, double x) {
  return nu / x * bessel_j_impl(nu, x) - bessel_j_impl(nu + 1.0, x);
}

// zero of J_nu in [a,b], which brackets a sign change
double polish_zero(double nu, double a, double b, double fa) {
  double x = 0.5 * (a + b);
  for (int it = 0; it < 100; ++it) {
    const double f = bessel_j_impl(nu, x);
    if (f == 0.0) return x;
    if ((f > 0) == (fa > 0)) {
      a = x;
      fa = f;
    } else {
      b = x;
    }
    const double d = bessel_jp(nu, x);
    double xn = x - f / d;
    if (!(xn > a && xn < b) || !std::isfinite(xn)) xn = 0.5 * (a + b);
    if (std::fabs(xn - x) <= 4e-16 * x || b - a <= 4e-16 * x) {
      x = xn;
      break;
    }
    x = xn;
  }
  return x;
}

double next_zero(double nu, double after) {
  // consecutive zeros are more than 2.5 apart for nu > -1; the first one exceeds max(nu,0)
  double a = after > 0 ? after + 1.0 : std::max(nu, 0.0) + 1e-3;
  double fa = bessel_j_impl(nu, a);
  const double step = kPi / 8;
  for (int i = 0; i < 4000; ++i) {
    const double b = a + step;
    const double fb = bessel_j_impl(nu, b);
    if ((fa > 0) != (fb > 0) || fb == 0.0) {
      const double z = polish_zero(nu, a, b, fa);
      if (!(std::fabs(bessel_j_impl(nu, z)) <= 1e-10))
        throw InternalError("Bessel zero polish failed", std::fabs(bessel_j_impl(nu, z)));
      return z;
    }
    a = b;
    fa = fb;
  }
  throw InternalError("failed to bracket a Bessel zero");
}

}  // namespace

std::vector<double> bessel_zeros(BesselOrder order, int count) {
  if (!(order.nu > -1.0)) throw ParameterError("Bessel order needs nu > -1");
  std::vector<double> z;
  z.reserve(count);
  double last = 0.0;
  for (int k = 0; k < count; ++k) {
    last = next_zero(order.nu, last);
    z.push_back(last);
  }
  return z;
}

double bessel_zero(BesselOrder order, int n) {
  if (n < 1) throw IndexError("Bessel zeros are indexed from 1");
  if (!(order.nu > -1.0)) throw ParameterError("Bessel order needs nu > -1");
  const double nu = order.nu;
  // McMahon expansion is reliable once beta dominates nu; otherwise walk from the first zero
  const double beta = (n + 0.5 * nu - 0.25) * kPi;
  if (beta > 8.0 * (std::fabs(nu) + 2.0) * (std::fabs(nu) + 2.0)) {
    const double mu = 4 * nu * nu;
    const double e = 8 * beta;
    const double g = beta - (mu - 1) / e - 4 * (mu - 1) * (7 * mu - 31) / (3 * e * e * e);
    for (double w = 0.3 * kPi; w <= 0.5 * kPi; w += 0.05 * kPi) {
      const double fa = bessel_j_impl(nu, g - w), fb = bessel_j_impl(nu, g + w);
      if ((fa > 0) != (fb > 0)) {
        const double z = polish_zero(nu, g - w, g + w, fa);
        if (std::fabs(bessel_j_impl(nu, z)) <= 1e-10) return z;
      }
    }
  }
  return bessel_zeros(order, n).back();
}

// ---------------------------------------------------------- scaled I_a

double bessel_i_scaled(double a, double z) {
  if (z == 0.0) return a == 0.0 ? 1.0 : (a > 0 ? 0.0 : std::numeric_limits<double>::infinity());
  if (z > 30.0) {
    const double mu = 4 * a * a;
    double term = 1.0, sum = 1.0, last = 1.0;
    bool ok = false;
    for (int k = 1; k < 100; ++k) {
      const double odd = 2.0 * k - 1;
      term *= -(mu - odd * odd) / (8.0 * k * z);
      const double at = std::fabs(term);
      if (at > last) break;
      last = at;
      sum += term;
      if (at < 1e-17 * std::fabs(sum)) {
        ok = true;
        break;
      }
    }
    if (ok) return sum / std::sqrt(2 * kPi * z);
  }
  // positive-term series summed outward from its largest term, all in e^{-z} scale
  const double h = 0.5 * z;
  // largest term: last k with k (k + a) <= h^2
  const int ks = std::max(0, static_cast<int>(std::floor(0.5 * (-a + std::sqrt(a * a + z * z)))));
  const double lt = (2.0 * ks + a) * std::log(h) - std::lgamma(ks + 1.0) - std::lgamma(ks + a + 1) - z;
  const double tk = std::exp(lt);
  double sum = tk, t = tk;
  for (int k = ks + 1; k < ks + 100000; ++k) {
    t *= h * (h / (k * (k + a)));
    sum += t;
    if (t < 1e-18 * sum) break;
  }
  t = tk;
  for (int k = ks; k > 0; --k) {
    t *= k * (k + a) / h / h;
    sum += t;
    if (t < 1e-18 * sum) break;
  }
  return sum;
}

// ------------------------------------------------------------- settings

double norm_const(const SettingId& s, int n) {
  s.validate();
  check_index(s, n);
  switch (s.variant) {
    case Variant::JacobiTrigPol:
    case Variant::JacobiTrigFun:
      return jacobi_c(s.jp, n);
    case Variant::JacobiScaled:
      return std::sqrt(kPi) * jacobi_c(s.jp, n);
    default: {
      return eigensystem(SettingId::fb_natural(s.bo.nu), n)->fb_norm(n - 1);
    }
  }
}

namespace {

Derivs jacobi_pol_derivs(JacobiParams p, int n, double t, bool with_derivs) {
  const double c = jacobi_c(p, n);
  const double u = std::cos(t), st = std::sin(t);
  Derivs d;
  d.f = c * jacobi_poly(n, p, u);
  if (!with_derivs) return d;
  const double p1 = jacobi_poly_deriv(n, p, u, 1), p2 = jacobi_poly_deriv(n, p, u, 2);
  d.d1 = -st * p1 * c;
  d.d2 = (st * st * p2 - u * p1) * c;
  return d;
}

Derivs jacobi_fun_derivs(JacobiParams p, int n, double t, bool with_derivs) {
  const Derivs g = jacobi_pol_derivs(p, n, t, with_derivs);
  const double W = jacobi_weight(p, t);
  Derivs d;
  d.f = W * g.f;
  if (!with_derivs) return d;
  const double a = p.alpha + 0.5, b = p.beta + 0.5;
  const double sh = std::sin(0.5 * t), ch = std::cos(0.5 * t);
  const double L1 = 0.5 * a * ch / sh - 0.5 * b * sh / ch;
  const double L2 = -0.25 * a / (sh * sh) - 0.25 * b / (ch * ch);
  const double W1 = W * L1, W2 = W * (L2 + L1 * L1);
  d.d1 = W1 * g.f + W * g.d1;
  d.d2 = W2 * g.f + 2 * W1 * g.d1 + W * g.d2;
  return d;
}

Derivs fb_natural_derivs(double nu, int n, double x, bool with_derivs) {
  // zeros come from the shared cache; a fresh bessel_zero per call is far too slow for low n
  const auto es = eigensystem(SettingId::fb_natural(nu), n);
  const double s = es->sqrt_eig(n - 1), c = es->fb_norm(n - 1);
  const double xm = std::pow(x, -nu);
  const double j0 = bessel_j_impl(nu, s * x);
  Derivs d;
  d.f = c * xm * j0;
  if (!with_derivs) return d;
  const double j1 = bessel_j_impl(nu + 1.0, s * x);
  d.d1 = -c * s * xm * j1;
  d.d2 = -c * s * xm * (s * j0 - (2 * nu + 1) / x * j1);
  return d;
}

}  // namespace

Derivs eigfun_derivs(const SettingId& s, int n, double x) {
  s.validate();
  check_index(s, n);
  require_interior(s, x, "eigfun argument");
  switch (s.variant) {
    case Variant::JacobiTrigPol:
      return jacobi_pol_derivs(s.jp, n, x, true);
    case Variant::JacobiTrigFun:
      return jacobi_fun_derivs(s.jp, n, x, true);
    case Variant::JacobiScaled: {
      const Derivs g = jacobi_fun_derivs(s.jp, n, kPi * x, true);
      const double r = std::sqrt(kPi);
      return {r * g.f, r * kPi * g.d1, r * kPi * kPi * g.d2};
    }
    case Variant::FBNatural:
      return fb_natural_derivs(s.bo.nu, n, x, true);
    case Variant::FBLebesgue: {
      const Derivs g = fb_natural_derivs(s.bo.nu, n, x, true);
      const double e = s.bo.nu + 0.5;
      const double m = std::pow(x, e), m1 = e * m / x, m2 = e * (e - 1) * m / (x * x);
      return {m * g.f, m1 * g.f + m * g.d1, m2 * g.f + 2 * m1 * g.d1 + m * g.d2};
    }
  }
  return {};
}

double eigfun(const SettingId& s, int n, double x) {
  s.validate();
  check_index(s, n);
  require_interior(s, x, "eigfun argument");
  switch (s.variant) {
    case Variant::JacobiTrigPol:
      return jacobi_pol_derivs(s.jp, n, x, false).f;
    case Variant::FBNatural:
      return fb_natural_derivs(s.bo.nu, n, x, false).f;
    case Variant::FBLebesgue:
      return std::pow(x, s.bo.nu + 0.5) * fb_natural_derivs(s.bo.nu, n, x, false).f;
    default:
      return eigfun_derivs(s, n, x).f;
  }
}

double apply_operator(const SettingId& s, double x, const Derivs& d) {
  const double a = s.jp.alpha, b = s.jp.beta, nu = s.bo.nu;
  switch (s.variant) {
    case Variant::JacobiTrigPol: {
      const double m = 0.5 * (a + b + 1);
      return -d.d2 - (a - b + (a + b + 1) * std::cos(x)) / std::sin(x) * d.d1 + m * m * d.f;
    }
    case Variant::JacobiTrigFun: {
      const double sh = std::sin(0.5 * x), ch = std::cos(0.5 * x);
      return -d.d2 + ((a * a - 0.25) / (4 * sh * sh) + (b * b - 0.25) / (4 * ch * ch)) * d.f;
    }
    case Variant::JacobiScaled: {
      const double sh = std::sin(0.5 * kPi * x), ch = std::cos(0.5 * kPi * x);
      return -d.d2 - kPi * kPi * ((0.25 - a * a) / (4 * sh * sh) + (0.25 - b * b) / (4 * ch * ch)) * d.f;
    }
    case Variant::FBNatural:
      return -d.d2 - (2 * nu + 1) / x * d.d1;
    case Variant::FBLebesgue:
      return -d.d2 - (0.25 - nu * nu) / (x * x) * d.f;
  }
  return 0.0;
}

double sqrt_eigenvalue(const SettingId& s, int n) {
  s.validate();
  check_index(s, n);
  switch (s.variant) {
    case Variant::JacobiTrigPol:
    case Variant::JacobiTrigFun:
      return std::fabs(n + 0.5 * (s.jp.alpha + s.jp.beta + 1));
    case Variant::JacobiScaled:
      return kPi * std::fabs(n + 0.5 * (s.jp.alpha + s.jp.beta + 1));
    default:
      return bessel_zero(s.bo, n);
  }
}

double eigenvalue(const SettingId& s, int n) {
  const double r = sqrt_eigenvalue(s, n);
  return r * r;
}

// ------------------------------------------------------------ Eigensystem

Eigensystem::Eigensystem(const SettingId& s, int capacity) : s_(s) {
  s.validate();
  if (capacity < 1) throw ParameterError("eigensystem capacity must be positive");
  sq_.resize(capacity);
  if (s.is_jacobi()) {
    const double a = s.jp.alpha, b = s.jp.beta;
    const double scale = s.variant == Variant::JacobiScaled ? kPi : 1.0;
    for (int k = 0; k < capacity; ++k) sq_[k] = scale * std::fabs(k + 0.5 * (a + b + 1));
    ra_.assign(capacity + 1, 0.0);
    rb_.assign(capacity + 1, 0.0);
    rb_[0] = (b - a) / (a + b + 2);
    for (int n = 1; n <= capacity; ++n) {
      const double c = 2.0 * n + a + b;
      rb_[n] = (b * b - a * a) / (c * (c + 2));
      if (n == 1)
        ra_[1] = 2.0 / (a + b + 2) * std::sqrt((1 + a) * (1 + b) / (a + b + 3));
      else
        ra_[n] = 2.0 / c * std::sqrt(n * (n + a) * (n + b) * (n + a + b) / ((c - 1) * (c + 1)));
    }
    p0_ = 1.0 / std::sqrt(jacobi_mass(s.jp));
  } else {
    zeros_ = bessel_zeros(s.bo, capacity);
    cn_.resize(capacity);
    jn1_.resize(capacity);
    for (int k = 0; k < capacity; ++k) {
      sq_[k] = zeros_[k];
      jn1_[k] = bessel_j_impl(s.bo.nu + 1.0, zeros_[k]);
      cn_[k] = std::sqrt(2.0) / std::fabs(jn1_[k]);
    }
  }
}

namespace {

// J_nu(z0 + h) for a zero z0 of J_nu, from the Taylor series in h. Needed close to
// x = 1, where rounding s (1 - dr) costs a relative error of eps / dr.
// Coefficients from z^2 J'' + z J' + (z^2 - nu^2) J = 0 expanded at z0.
double bessel_j_at_zero_offset(double nu, double z0, double jnu1, double h) {
  double a2 = 0, a1 = 0, a0 = 0, a = -jnu1;  // a_{k-2}, a_{k-1}, a_k, a_{k+1} with k = 0
  double sum = a * h, hp = h, prev = sum;
  const double zz = z0 * z0 - nu * nu;
  for (int k = 0; k < 400; ++k) {
    const double next = -(z0 * (k + 1) * (2 * k + 1) * a + (k * k + zz) * a0 + 2 * z0 * a1 + a2) /
                        (z0 * z0 * (k + 2) * (k + 1));
    a2 = a1;
    a1 = a0;
    a0 = a;
    a = next;
    hp *= h;
    const double term = a * hp;
    sum += term;
    if (k > 4 && std::fabs(term) + std::fabs(prev) <= 1e-18 * std::fabs(sum)) break;
    prev = term;
  }
  return sum;
}

}  // namespace

void Eigensystem::values(double x, int count, double* out) const {
  values_lr(x, s_.length() - x, count, out);
}

void Eigensystem::values_lr(double dl, double dr, int count, double* out) const {
  if (count > capacity()) throw IndexError("eigensystem capacity exceeded");
  if (count <= 0) return;
  double mult = 1.0;
  if (s_.is_jacobi()) {
    const double sc = s_.variant == Variant::JacobiScaled ? kPi : 1.0;
    const double tl = sc * dl, tr = sc * dr;
    if (s_.variant != Variant::JacobiTrigPol)
      mult = std::pow(std::sin(0.5 * tl), s_.jp.alpha + 0.5) * std::pow(std::sin(0.5 * tr), s_.jp.beta + 0.5);
    if (s_.variant == Variant::JacobiScaled) mult *= std::sqrt(kPi);
    const double u = tl <= tr ? std::cos(tl) : -std::cos(tr);
    double pm = 0.0, pc = p0_;
    out[0] = pc * mult;
    for (int n = 0; n + 1 < count; ++n) {
      const double pn = ((u - rb_[n]) * pc - ra_[n] * pm) / ra_[n + 1];
      pm = pc;
      pc = pn;
      out[n + 1] = pc * mult;
    }
  } else {
    const double nu = s_.bo.nu;
    const double x = dl <= dr ? dl : 1.0 - dr;
    const double leb = s_.variant == Variant::FBLebesgue ? std::pow(x, nu + 0.5) : 1.0;
    if (x < 1e-100) {
      // x^{-nu} J_nu(s x) has reached its limit (s/2)^nu / Gamma(nu+1)
      const double lg = std::lgamma(nu + 1);
      for (int k = 0; k < count; ++k) out[k] = cn_[k] * leb * std::exp(nu * std::log(0.5 * zeros_[k]) - lg);
      return;
    }
    mult = std::pow(x, -nu) * leb;
    for (int k = 0; k < count; ++k) {
      const double h = -zeros_[k] * dr;
      const bool taylor = dr < dl && -h <= 4.0;
      out[k] = cn_[k] * mult * (taylor ? bessel_j_at_zero_offset(nu, zeros_[k], jn1_[k], h) : bessel_j_impl(nu, zeros_[k] * x));
    }
  }
}

double eigfun_lr(const SettingId& s, int n, double dl, double dr) {
  s.validate();
  check_index(s, n);
  if (!(dl > 0) || !(dr > 0)) throw DomainError("eigfun distances to the endpoints must be positive");
  const int k = n - s.origin();
  auto es = eigensystem(s, k + 1);
  std::vector<double> v(k + 1);
  es->values_lr(dl, dr, k + 1, v.data());
  return v[k];
}

std::vector<double> Eigensystem::values(double x, int count) const {
  std::vector<double> v(count);
  values(x, count, v.data());
  return v;
}

std::shared_ptr<const Eigensystem> eigensystem(const SettingId& s, int capacity) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, double, double>, std::shared_ptr<const Eigensystem>> cache;
  const auto key = std::make_tuple(static_cast<int>(s.variant), s.jp.alpha, s.jp.beta, s.bo.nu);
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(key);
    if (it != cache.end() && it->second->capacity() >= capacity) return it->second;
  }
  // build outside the lock; a racing builder just produces an equal object
  const int cap = std::max(capacity, 64);
  auto es = std::make_shared<const Eigensystem>(s, cap);
  std::lock_guard<std::mutex> lk(mu);
  auto& slot = cache[key];
  if (!slot || slot->capacity() < es->capacity()) slot = es;
  return slot;
}

}  // namespace spl
