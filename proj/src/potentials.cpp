#include "spl/potentials.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <tuple>

#include "heat_model.hpp"
#include "spl/kernels.hpp"
#include "spl/parallel.hpp"
#include "spl/quadrature.hpp"
#include "spl/specfun.hpp"

namespace spl {

void PotentialSpec::validate() const {
  setting.validate();
  if (!(sigma > 0) || !std::isfinite(sigma)) throw ParameterError("sigma must be a positive number");
  if (variant == PotentialVariant::Riesz && setting.is_jacobi() &&
      std::fabs(setting.jp.alpha + setting.jp.beta + 1) < 1e-14)
    throw ParameterError(
        "Riesz potential needs alpha + beta != -1: for alpha + beta = -1 the bottom eigenvalue is 0 and the "
        "spectrum of the Jacobi operator is not separated from 0 (use the Bessel variant)");
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Series data for one (spec, u_split): coefficients of phi_k(x) phi_k(y) in the
// part of the heat-time integral above u_split.
struct Coeffs {
  std::shared_ptr<const Eigensystem> es;
  int n = 0;
  double shift = 0;         // 1 for the Bessel variant
  std::vector<double> c;    // lambda^{-sigma} Q(sigma, lambda u_m), lambda shifted
  std::vector<double> e;    // e^{-lambda_k u_m}, unshifted (heat series at u_m)
  double tail_factor = 0;   // bound for sum_{k >= n} c_k per unit |phi phi|
  double lgamma_sigma = 0;
};

double spacing(const SettingId& s) {
  if (s.variant == Variant::JacobiTrigPol || s.variant == Variant::JacobiTrigFun) return 1.0;
  return s.variant == Variant::JacobiScaled ? kPi : 2.5;
}

std::shared_ptr<const Coeffs> coeffs_for(const PotentialSpec& spec, double um) {
  using Key = std::tuple<int, double, double, double, double, int, double>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const Coeffs>> cache;
  const SettingId& s = spec.setting;
  const Key key{static_cast<int>(s.variant), s.jp.alpha, s.jp.beta, s.bo.nu, spec.sigma,
                static_cast<int>(spec.variant), um};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto C = std::make_shared<Coeffs>();
  C->shift = spec.variant == PotentialVariant::Bessel ? 1.0 : 0.0;
  C->lgamma_sigma = std::lgamma(spec.sigma);
  // enough modes that lambda u_m passes 60 (+ room for the sigma power)
  const double zcut = 60.0 + std::max(0.0, spec.sigma - 1) * std::log(60.0 + spec.sigma);
  const double smax = std::sqrt(zcut / um);
  const double per = s.is_jacobi() ? (s.variant == Variant::JacobiScaled ? kPi : 1.0) : kPi;
  int n = static_cast<int>(smax / per) + 24;
  auto es = eigensystem(s, n + 1);
  while (es->eig(n - 1) * um < zcut) {
    n = n * 3 / 2;
    es = eigensystem(s, n + 1);
  }
  C->es = es;
  C->n = n;
  C->c.resize(n);
  C->e.resize(n);
  for (int k = 0; k < n; ++k) {
    const double lam = es->eig(k) + C->shift;
    C->c[k] = std::pow(lam, -spec.sigma) * boost::math::gamma_q(spec.sigma, lam * um);
    C->e[k] = std::exp(-es->eig(k) * um);
  }
  // sum_{k>=n} e^{-lambda_k u} <= e^{-lambda_n u} / (1 - e^{-2 s_n delta u_m}) for u >= u_m
  const double lam_n = es->eig(n) + C->shift;
  const double r = std::exp(-2 * es->sqrt_eig(n) * spacing(s) * um);
  C->tail_factor = std::pow(lam_n, -spec.sigma) * boost::math::gamma_q(spec.sigma, lam_n * um) / (1 - r);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, C);
  return C;
}

struct PointData {
  detail::Pt p{0, 0};  // distances to both ends
  std::vector<double> v;
};

PointData point_data(const Coeffs& C, double dl, double dr) {
  PointData p;
  p.p = {dl, dr};
  p.v.resize(C.n);
  C.es->values_lr(dl, dr, C.n, p.v.data());
  return p;
}

KernelValue kernel_core(const PotentialSpec& spec, const Coeffs& C, const detail::HeatGeometry& geo,
                        const PointData& px, const PointData& py, double d, double um) {
  const double sigma = spec.sigma;
  double series = 0, abs_sum = 0, amax = 0, g_um = 0, g_abs = 0;
  for (int k = 0; k < C.n; ++k) {
    const double a = px.v[k] * py.v[k];
    amax = std::max(amax, std::fabs(a));
    const double t = C.c[k] * a;
    series += t;
    abs_sum += std::fabs(t);
    g_um += C.e[k] * a;
    g_abs += std::fabs(C.e[k] * a);
  }
  KernelValue kv;
  kv.value = series;
  kv.tail_bound = 2 * amax * C.tail_factor + 8 * kEps * abs_sum;

  // head: heat times below u_m from the small-time model, corrected linearly in u
  if (d * d > 180 * um) return kv;
  const detail::Pt x = px.p, y = py.p;
  // keep u = e^s representable; the kernel changes by a negligible amount below this separation
  if (d != 0.0 && std::fabs(d) < 1e-150) d = std::copysign(1e-150, d);
  const double m_um = detail::heat_model(geo, um, x, y, d);
  // calibrate only when the series value at u_m stands above its rounding noise;
  // otherwise bound the model by its measured mismatch
  const double g_noise = 8 * kEps * g_abs;
  double kappa = 0, model_rel = 1.0;
  if (m_um > 0 && std::isfinite(m_um)) {
    if (g_um > 1e3 * g_noise) {
      kappa = (g_um / m_um - 1) / um;
      model_rel = std::max(1e-12, (kappa * um) * (kappa * um));
    } else {
      model_rel = std::max(1e-12, (std::fabs(g_um - m_um) + g_noise) / m_um);
    }
  }
  const double shift = C.shift;
  const double lg = C.lgamma_sigma;
  auto integrand = [&](double s) {
    const double u = std::exp(s);
    const double m = detail::heat_model(geo, u, x, y, d);
    if (m == 0.0) return 0.0;
    return m * (1 + kappa * u) * std::exp(sigma * s - shift * u - lg);
  };
  double s_lo;
  double remainder = 0;
  if (d != 0.0) {
    s_lo = 2 * std::log(std::fabs(d)) - std::log(180.0);
  } else {
    // on the diagonal the model is (4 pi u)^{-1/2} times the weight once the
    // endpoint factors have saturated; integrate that part in closed form
    const double edge = std::min(x.l, x.r);
    const double u_lo = std::min(1e-14 * edge * edge, um * 1e-3);
    s_lo = std::log(u_lo);
    remainder = detail::model_weight(geo, x, y) / std::sqrt(4 * kPi) * std::pow(u_lo, sigma - 0.5) /
                (sigma - 0.5) * std::exp(-lg);
  }
  const double s_hi = std::log(um);
  std::vector<double> cuts{s_lo, s_hi};
  const double ld = d != 0.0 ? 2 * std::log(std::fabs(d)) - std::log(4.0) : s_lo;
  for (double lb : {ld, std::log(x.l * y.l / 2), std::log(x.r * y.r / 2)})
    if (lb > s_lo && lb < s_hi) cuts.push_back(lb);
  std::sort(cuts.begin(), cuts.end());
  double head = remainder, herr = 0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto q = integrate_gk(integrand, cuts[i], cuts[i + 1], 1e-11);
    head += q.value;
    herr += q.error;
  }
  kv.value += head;
  kv.tail_bound += herr + std::fabs(head) * model_rel + 8 * kEps * std::fabs(head);
  return kv;
}

}  // namespace

namespace detail {

KernelValue potential_kernel_sep(const PotentialSpec& spec, double x, double y, double d, double tol,
                                 const PotentialOptions& opt) {
  spec.validate();
  require_interior(spec.setting, x, "x");
  require_interior(spec.setting, y, "y");
  if (d == 0.0 && spec.sigma <= 0.5)
    throw SingularityError("potential kernel is infinite on the diagonal for sigma <= 1/2");
  if (!(opt.u_split > 0 && opt.u_split < 1)) throw ParameterError("u_split must lie in (0, 1)");
  const auto geo = heat_geometry(spec.setting);
  const double L = spec.setting.length();
  KernelValue kv;
  // a smaller split tightens the model part next to the endpoints
  for (double um = opt.u_split;; um /= 4) {
    const auto C = coeffs_for(spec, um);
    const auto px = point_data(*C, x, L - x);
    const auto py = point_data(*C, y, L - y);
    kv = kernel_core(spec, *C, geo, px, py, d, um);
    if (kv.tail_bound <= std::max(tol, 1e-9 * std::fabs(kv.value))) return kv;
    if (um < opt.u_split / 10) break;
  }
  throw TruncationError("potential kernel error estimate exceeds tol", kv.tail_bound);
}

}  // namespace detail

KernelValue potential_kernel(const PotentialSpec& spec, double x, double y, double tol, const PotentialOptions& opt) {
  return detail::potential_kernel_sep(spec, x, y, y - x, tol, opt);
}

PotentialValues apply_potential(const PotentialSpec& spec, const std::function<double(double)>& f,
                                const std::vector<double>& points, double tol, const PotentialOptions& opt) {
  const double L = spec.setting.length();
  const double inner = std::nextafter(L, 0.0);
  return apply_potential_lr(
      spec, [&](double dl, double dr) { return f(dl <= dr ? dl : std::min(L - dr, inner)); }, points, tol, opt);
}

PotentialValues apply_potential_lr(const PotentialSpec& spec, const std::function<double(double, double)>& f,
                                   const std::vector<double>& points, double tol, const PotentialOptions& opt) {
  spec.validate();
  for (double x : points) require_interior(spec.setting, x, "evaluation point");
  const auto C = coeffs_for(spec, opt.u_split);
  const auto geo = detail::heat_geometry(spec.setting);
  const MeasureId m = measure_of(spec.setting);
  const double L = spec.setting.length();
  const double um = opt.u_split;
  PotentialValues out;
  out.value.resize(points.size());
  out.error.resize(points.size());
  parallel_for(points.size(), [&](size_t i) {
    const double x = points[i];
    const PointData px = point_data(*C, x, L - x);
    PointData py;
    py.v.resize(C->n);
    double kerr = 0;
    // y = point, sep = y - x, (dl, dr) distances of y to 0 and L
    auto eval = [&](double y, double sep, double dl, double dr) {
      if (sep == 0.0 || !(dl > 0) || !(dr > 0)) return 0.0;
      (void)y;
      const double fy = f(dl, dr);
      if (fy == 0.0) return 0.0;
      py.p = {dl, dr};
      C->es->values_lr(dl, dr, C->n, py.v.data());
      const KernelValue kv = kernel_core(spec, *C, geo, px, py, sep, um);
      const double w = density_lr(m, dl, dr);
      kerr = std::max(kerr, kv.tail_bound * std::fabs(fy) * w);
      return kv.value * fy * w;
    };
    auto left = [&](double, double c) {
      if (c < 0) return eval(-c, -c - x, -c, L + c);  // near 0
      return eval(x - c, -c, x - c, L - x + c);       // near x
    };
    auto right = [&](double y, double c) {
      if (c < 0) return eval(x - c, -c, x - c, L - x + c);  // near x
      (void)y;
      return eval(L - c, L - c - x, L - c, c);  // near L
    };
    QuadResult a, b;
    try {
      a = integrate_ts(left, 0.0, x, tol);
      b = integrate_ts(right, x, L, tol);
    } catch (const std::domain_error& e) {
      throw QuadratureError(std::string("potential integral diverges near x = ") + fmt(x) + ": " +
                            e.what());
    }
    if (!std::isfinite(a.value) || !std::isfinite(b.value))
      throw QuadratureError("potential integral is not finite at x = " + fmt(x));
    out.value[i] = a.value + b.value;
    out.error[i] = a.error + b.error + kerr * L;
  });
  return out;
}

PotentialValues apply_potential(const PotentialSpec& spec, const std::function<double(double)>& f,
                                const GradedGrid& g, double tol, const PotentialOptions& opt) {
  return apply_potential(spec, f, g.points, tol, opt);
}

double spectral_potential_oracle(const PotentialSpec& spec, const std::vector<double>& coefficients, double x) {
  spec.validate();
  require_interior(spec.setting, x, "x");
  const SettingId& s = spec.setting;
  const double shift = spec.variant == PotentialVariant::Bessel ? 1.0 : 0.0;
  double sum = 0;
  for (size_t k = 0; k < coefficients.size(); ++k) {
    if (coefficients[k] == 0.0) continue;
    const int n = s.origin() + static_cast<int>(k);
    sum += std::pow(eigenvalue(s, n) + shift, -spec.sigma) * coefficients[k] * eigfun(s, n, x);
  }
  return sum;
}

KernelValue potential_kernel_poisson_path(const PotentialSpec& spec, double x, double y, double tol) {
  spec.validate();
  if (spec.variant != PotentialVariant::Riesz)
    throw ParameterError("the Poisson-time route is only available for the Riesz variant");
  require_interior(spec.setting, x, "x");
  require_interior(spec.setting, y, "y");
  if (x == y) throw SingularityError("the Poisson-time route needs x != y");
  const SettingId& s = spec.setting;
  const double a2 = 2 * spec.sigma;
  const double ts = 0.05;
  // t >= ts: sum_k phi_k(x) phi_k(y) s_k^{-2 sigma} Q(2 sigma, s_k ts)
  const double per = s.is_jacobi() ? (s.variant == Variant::JacobiScaled ? kPi : 1.0) : kPi;
  const int n = static_cast<int>((60.0 + a2 * 4) / ts / per) + 24;
  auto es = eigensystem(s, n);
  const auto vx = es->values(x, n), vy = es->values(y, n);
  double series = 0;
  for (int k = 0; k < n; ++k) {
    const double sk = es->sqrt_eig(k);
    series += vx[k] * vy[k] * std::pow(sk, -a2) * boost::math::gamma_q(a2, sk * ts);
  }
  // t < ts: subordinated Poisson kernel, integrated in log t
  const double lg = std::lgamma(a2);
  KernelOptions kopt;
  auto integrand = [&](double lt) {
    const double t = std::exp(lt);
    return subordinated_poisson(s, t, x, y, 1e-14, kopt).value * std::exp(a2 * lt - lg);
  };
  const double d = std::fabs(x - y);
  const double lo = std::log(std::min(1e-9, d * 1e-6)), hi = std::log(ts);
  std::vector<double> cuts{lo, hi};
  if (std::log(d) > lo && std::log(d) < hi) cuts.push_back(std::log(d));
  std::sort(cuts.begin(), cuts.end());
  KernelValue kv;
  kv.value = series;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto q = integrate_gk(integrand, cuts[i], cuts[i + 1], 1e-10);
    kv.value += q.value;
    kv.tail_bound += q.error;
  }
  if (kv.tail_bound > std::max(tol, 1e-8 * std::fabs(kv.value)))
    throw QuadratureError("Poisson-time potential quadrature did not converge", kv.tail_bound);
  return kv;
}

void write_potential_matrix_csv(std::ostream& os, const PotentialSpec& spec, const std::vector<double>& points,
                                double tol, const PotentialOptions& opt) {
  const size_t n = points.size();
  std::vector<KernelValue> out(n * n);
  std::vector<char> skip(n * n, 0);
  parallel_for(n * n, [&](size_t idx) {
    const size_t i = idx / n, j = idx % n;
    if (i == j && spec.sigma <= 0.5) {
      skip[idx] = 1;
      return;
    }
    out[idx] = potential_kernel(spec, points[i], points[j], tol, opt);
  });
  const auto old = os.precision(17);
  os << "x,y,value,error\n";
  for (size_t idx = 0; idx < n * n; ++idx) {
    if (skip[idx]) continue;
    os << points[idx / n] << ',' << points[idx % n] << ',' << out[idx].value << ',' << out[idx].tail_bound << '\n';
  }
  os.precision(old);
}

}  // namespace spl
