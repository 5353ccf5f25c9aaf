#include "spl/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "heat_model.hpp"
#include "spl/parallel.hpp"
#include "spl/quadrature.hpp"

namespace spl {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// lower bound for s_{k+1} - s_k
double eig_spacing(const SettingId& s) {
  switch (s.variant) {
    case Variant::JacobiTrigPol:
    case Variant::JacobiTrigFun: return 1.0;
    case Variant::JacobiScaled: return kPi;
    default: return 2.5;  // consecutive Bessel zeros are at least this far apart for nu > -1
  }
}

void check_point(const SettingId& s, double x, double y) {
  require_interior(s, x, "x");
  require_interior(s, y, "y");
}

}  // namespace

double tail_growth_exponent(const SettingId& s) {
  switch (s.variant) {
    case Variant::JacobiTrigPol:
      return 2 * std::max({s.jp.alpha + 0.5, s.jp.beta + 0.5, 0.0});
    case Variant::FBNatural:
      return 2 * std::max(s.bo.nu + 0.5, 0.0);
    default:
      return 0.0;
  }
}

namespace detail {

SeriesResult sum_series(const Eigensystem& es, SeriesKind kind, double t, const double* vx, const double* vy,
                        int avail, double tol, double gamma) {
  const double delta = eig_spacing(es.setting());
  SeriesResult r;
  double sum = 0, abs_sum = 0, amax = 0, tail = std::numeric_limits<double>::infinity();
  for (int k = 0; k < avail; ++k) {
    const double a = vx[k] * vy[k];
    amax = std::max(amax, std::fabs(a));
    const double sk = es.sqrt_eig(k);
    const double w = kind == SeriesKind::Poisson ? std::exp(-t * sk) : std::exp(-t * sk * sk);
    sum += w * a;
    abs_sum += std::fabs(w * a);
    const int n = k + 1;
    if (n < 8) continue;
    // modes n, n+1, ... have s >= sk + delta (j+1)
    const double s_next = sk + delta;
    const double grow = std::exp(gamma / n);
    double ratio, first;
    if (kind == SeriesKind::Poisson) {
      ratio = std::exp(-t * delta);
      first = std::exp(-t * s_next);
    } else {
      ratio = std::exp(-2 * t * s_next * delta);
      first = std::exp(-t * s_next * s_next);
    }
    if (ratio * grow >= 1.0) continue;
    tail = 2 * amax * first * grow / (1 - ratio * grow);
    if (tail <= tol) {
      r.used = n;
      r.converged = true;
      break;
    }
    r.used = n;
  }
  if (!r.converged) r.used = avail;
  r.kv.value = sum;
  r.kv.tail_bound = tail + 4 * kEps * abs_sum;
  return r;
}

int terms_estimate(const SettingId& s, SeriesKind kind, double t, double tol) {
  const double L = std::log(100.0 / std::min(tol, 1.0)) + 2 * tail_growth_exponent(s);
  const double smax = kind == SeriesKind::Poisson ? L / t : std::sqrt(L / t);
  const double per = s.is_jacobi() ? (s.variant == Variant::JacobiScaled ? kPi : 1.0) : kPi;
  const double n = smax / per + 16.0;
  return static_cast<int>(std::min(n, 1e9));
}

}  // namespace detail

namespace {

KernelValue series_kernel(const SettingId& s, detail::SeriesKind kind, double t, double x, double y, double tol,
                          const KernelOptions& opt) {
  s.validate();
  check_point(s, x, y);
  if (!(tol > 0)) throw ParameterError("tolerance must be positive");
  const double tmin = kind == detail::SeriesKind::Poisson ? opt.t_min_poisson : opt.t_min_heat;
  if (!(t >= tmin))
    throw ResolutionError("t = " + fmt(t) + " is below t_min = " + fmt(tmin) +
                          "; the eigenseries would need more than n_max terms");
  const double gamma = tail_growth_exponent(s);
  int cap = std::min(detail::terms_estimate(s, kind, t, tol), opt.n_max);
  std::vector<double> vx, vy;
  for (;;) {
    auto es = eigensystem(s, cap);
    vx.resize(cap);
    vy.resize(cap);
    es->values(x, cap, vx.data());
    es->values(y, cap, vy.data());
    const auto r = detail::sum_series(*es, kind, t, vx.data(), vy.data(), cap, tol, gamma);
    if (r.converged) return r.kv;
    if (cap >= opt.n_max)
      throw TruncationError("kernel series did not reach tol within n_max terms", r.kv.tail_bound);
    cap = std::min(2 * cap, opt.n_max);
  }
}

}  // namespace

KernelValue poisson_kernel(const SettingId& s, double t, double x, double y, double tol, const KernelOptions& opt) {
  return series_kernel(s, detail::SeriesKind::Poisson, t, x, y, tol, opt);
}

KernelValue heat_kernel(const SettingId& s, double t, double x, double y, double tol, const KernelOptions& opt) {
  return series_kernel(s, detail::SeriesKind::Heat, t, x, y, tol, opt);
}

KernelValue subordinated_poisson(const SettingId& s, double t, double x, double y, double tol,
                                 const KernelOptions& opt) {
  s.validate();
  check_point(s, x, y);
  if (!(t > 0)) throw DomainError("t must be positive");
  if (t > opt.T_sub) throw DomainError("subordination is only used for t <= T_sub");
  if (!(tol > 0)) throw ParameterError("tolerance must be positive");

  // Heat times below u_lo contribute less than e^{-100} relative.
  const double u_lo = t * t / 400;
  const double u_ser = std::max(u_lo, opt.u_split);
  const int cap = std::min(detail::terms_estimate(s, detail::SeriesKind::Heat, u_ser, 1e-17), opt.n_max);
  auto es = eigensystem(s, std::max(cap, 2));
  std::vector<double> vx(cap), vy(cap), a(cap), lam(cap);
  es->values(x, cap, vx.data());
  es->values(y, cap, vy.data());
  double amax = 0;
  for (int k = 0; k < cap; ++k) {
    a[k] = vx[k] * vy[k];
    lam[k] = es->eig(k);
    amax = std::max(amax, std::fabs(a[k]));
  }
  const double delta = eig_spacing(s);

  // mode 0 is handled exactly: its subordination integral is e^{-t sqrt(lambda_0)}
  const double mode0 = a[0] * std::exp(-t * es->sqrt_eig(0));

  // heat series without mode 0
  auto rest_series = [&](double u) {
    double sum = 0;
    for (int k = 1; k < cap; ++k) {
      const double w = std::exp(-u * lam[k]);
      sum += w * a[k];
      const double r = std::exp(-2 * u * es->sqrt_eig(k) * delta);
      if (k >= 8 && r < 1 && 2 * amax * w / (1 - r) < 1e-17 * amax) break;
    }
    return sum;
  };

  const auto geo = detail::heat_geometry(s);
  const double d = y - x;
  double kappa = 0;
  bool use_model = u_lo < u_ser;
  if (use_model) {
    const double m = detail::heat_model(geo, u_ser, x, y, d);
    const double g = rest_series(u_ser) + a[0] * std::exp(-u_ser * lam[0]);
    if (std::fabs(m) > 1e-300 * std::max(1.0, std::fabs(g))) kappa = (g / m - 1) / u_ser;
  }

  const double c = t / std::sqrt(4 * kPi);
  auto integrand = [&](double sl) {
    const double u = std::exp(sl);
    const double damp = std::exp(-t * t / (4 * u));
    if (damp == 0.0) return 0.0;
    double r;
    if (u < u_ser)
      r = detail::heat_model(geo, u, x, y, d) * (1 + kappa * u) - a[0] * std::exp(-u * lam[0]);
    else
      r = rest_series(u);
    return c * r * damp / std::sqrt(u);
  };

  const double lam1 = es->eig(1);
  const double U = std::max(40.0 / lam1, 4 * u_ser);
  std::vector<double> cuts{std::log(u_lo), std::log(U)};
  for (double b : {t * t / 4, u_ser})
    if (b > u_lo && b < U) cuts.push_back(std::log(b));
  std::sort(cuts.begin(), cuts.end());
  KernelValue kv;
  kv.value = mode0;
  double scale = std::fabs(mode0);
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto q = integrate_gk(integrand, cuts[i], cuts[i + 1], 1e-11);
    kv.value += q.value;
    kv.tail_bound += q.error;
    scale = std::max(scale, std::fabs(q.value));
  }
  // beyond U: |rest| <= 2 amax e^{-lambda_1 u}
  kv.tail_bound += c * 2 * amax * std::exp(-lam1 * U) * 2 / std::sqrt(U);
  kv.tail_bound += 64 * kEps * scale;
  if (kv.tail_bound > std::max(tol, 1e-6 * std::fabs(kv.value)))
    throw QuadratureError("subordination quadrature did not converge", kv.tail_bound);
  return kv;
}

KernelTable::KernelTable(const SettingId& s, const std::vector<double>& coords, int terms)
    : s_(s), coords_(coords), terms_(terms) {
  s.validate();
  for (double x : coords) require_interior(s, x, "table coordinate");
  es_ = eigensystem(s, terms);
  vals_.resize(coords.size() * static_cast<size_t>(terms));
  parallel_for(coords.size(), [&](size_t i) { es_->values(coords_[i], terms_, &vals_[i * terms_]); });
}

namespace {

KernelValue table_sum(const SettingId& s, const Eigensystem& es, detail::SeriesKind kind, const double* vi,
                      const double* vj, int terms, double t, double xi, double xj, double tol,
                      const KernelOptions& opt) {
  const double tmin = kind == detail::SeriesKind::Poisson ? opt.t_min_poisson : opt.t_min_heat;
  if (!(t >= tmin)) throw ResolutionError("t is below t_min");
  const auto r = detail::sum_series(es, kind, t, vi, vj, terms, tol, tail_growth_exponent(s));
  if (r.converged) return r.kv;
  // table too short for this t: fall back to the direct series
  return kind == detail::SeriesKind::Poisson ? poisson_kernel(s, t, xi, xj, tol, opt)
                                             : heat_kernel(s, t, xi, xj, tol, opt);
}

}  // namespace

KernelValue KernelTable::poisson(double t, int i, int j, double tol, const KernelOptions& opt) const {
  return table_sum(s_, *es_, detail::SeriesKind::Poisson, &vals_[i * size_t(terms_)], &vals_[j * size_t(terms_)],
                   terms_, t, coords_[i], coords_[j], tol, opt);
}

KernelValue KernelTable::heat(double t, int i, int j, double tol, const KernelOptions& opt) const {
  return table_sum(s_, *es_, detail::SeriesKind::Heat, &vals_[i * size_t(terms_)], &vals_[j * size_t(terms_)],
                   terms_, t, coords_[i], coords_[j], tol, opt);
}

void write_kernel_slice_csv(std::ostream& os, const SettingId& s, bool heat, const std::vector<double>& ts,
                            const std::vector<double>& xs, const std::vector<double>& ys, double tol,
                            const KernelOptions& opt) {
  const size_t n = ts.size() * xs.size() * ys.size();
  std::vector<KernelValue> out(n);
  parallel_for(n, [&](size_t idx) {
    const size_t iy = idx % ys.size(), ix = (idx / ys.size()) % xs.size(), it = idx / (ys.size() * xs.size());
    out[idx] = heat ? heat_kernel(s, ts[it], xs[ix], ys[iy], tol, opt)
                    : poisson_kernel(s, ts[it], xs[ix], ys[iy], tol, opt);
  });
  const auto old = os.precision(17);
  os << "t,x,y,value,tail_bound\n";
  for (size_t idx = 0; idx < n; ++idx) {
    const size_t iy = idx % ys.size(), ix = (idx / ys.size()) % xs.size(), it = idx / (ys.size() * xs.size());
    os << ts[it] << ',' << xs[ix] << ',' << ys[iy] << ',' << out[idx].value << ',' << out[idx].tail_bound << '\n';
  }
  os.precision(old);
}

}  // namespace spl
