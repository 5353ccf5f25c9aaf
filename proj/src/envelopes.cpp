#include "spl/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "spl/kernels.hpp"
#include "spl/measures.hpp"
#include "spl/parallel.hpp"
#include "spl/quadrature.hpp"
#include "spl/specfun.hpp"

namespace spl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool same(double a, double b) { return std::fabs(a - b) <= kIndicatorTol; }
double logp(double x) { return std::max(std::log(x), 0.0); }

// trichotomy factor in sigma vs 1/2; r = (sum)(complement)/|difference|
double sigma_branch(double sigma, double r) {
  if (same(sigma, 0.5)) return std::log(r);
  if (sigma > 0.5) return 1.0;
  return std::pow(r, 1 - 2 * sigma);
}

double jacobi_weight_factor(JacobiParams p, double th, double ph) {
  return std::pow(std::sin(th / 2) * std::sin(ph / 2), p.alpha + 0.5) *
         std::pow(std::cos(th / 2) * std::cos(ph / 2), p.beta + 0.5);
}

double jacobi_poisson_short(JacobiParams p, double t, double th, double ph) {
  const double d = th - ph;
  return std::pow(t + th + ph, -2 * p.alpha - 1) * std::pow(t + 2 * kPi - th - ph, -2 * p.beta - 1) * t /
         (t * t + d * d);
}

double jacobi_potential(JacobiParams p, double sigma, double th, double ph) {
  const double a = th + ph, b = 2 * kPi - th - ph, d = std::fabs(th - ph);
  if (sigma <= 0.5 + kIndicatorTol && d == 0) return kInf;
  double e = 1;
  if (same(sigma, p.alpha + 1)) e += std::log(2 * kPi / a);
  if (same(sigma, p.beta + 1)) e += std::log(2 * kPi / b);
  e += std::pow(a, 2 * sigma - 2 * (p.alpha + 1)) * std::pow(b, 2 * sigma - 2 * (p.beta + 1)) *
       sigma_branch(sigma, a * b / d);
  return e;
}

double fb_potential(double nu, double sigma, double x, double y) {
  const double a = x + y, b = 2 - x - y, d = std::fabs(x - y);
  if (sigma <= 0.5 + kIndicatorTol && d == 0) return kInf;
  double e = 1;
  if (same(sigma, nu + 1)) e += std::log(2 / a);
  if (same(sigma, 1.5)) e += std::log(2 / b);
  e += std::pow(a, 2 * sigma - 2 * (nu + 1)) * std::pow(b, 2 * sigma - 3) * sigma_branch(sigma, a * b / d);
  return (1 - x) * (1 - y) * e;
}

}  // namespace

void JGammaArgs::validate() const {
  if (!(M > 0)) throw ParameterError("M must be positive");
  if (!(w > 0 && w <= M)) throw ParameterError("w must lie in (0, M]");
  if (!(T >= 0 && S >= T)) throw ParameterError("need 0 <= T <= S");
  if (gamma <= -1 && !(T > 0))
    throw DomainError("gamma <= -1 needs T > 0: the integral diverges at t = 0");
  if (!std::isfinite(gamma) || !std::isfinite(S)) throw ParameterError("arguments must be finite");
}

double j_gamma_closed(const JGammaArgs& a) {
  a.validate();
  const double T = a.T, S = a.S, w = a.w, g = a.gamma;
  if (T == S) return 0.0;
  const double f = (S - T) / S;
  if (g > -1) {
    const double Sw = std::max(S, w), Tw = std::max(T, w);
    const double base = f * std::pow(S, g + 1) / (Sw * Sw);
    if (same(g, 1)) return base * (1 + logp(S / Tw));
    if (g > 1) return base;
    return base * std::pow(Tw / Sw, g - 1);
  }
  const double Tw = std::max(T, w);
  const double base = f * std::pow(T, g + 1) / (Tw * Tw);
  if (same(g, -1)) return base * (1 + logp(std::min(S, w) / T));
  return base;
}

double j_gamma_quad(const JGammaArgs& a) {
  a.validate();
  const double g = a.gamma, w = a.w;
  if (a.T == a.S) return 0.0;
  double lo = a.T, head = 0;
  if (a.T == 0) {
    // int_0^c t^g / (t^2 + w^2) as a power series in (t/w)^2, c <= w/2
    const double c = std::min(w / 2, a.S);
    double term = std::pow(c, g + 1) / (w * w);
    const double q = -(c * c) / (w * w);
    for (int k = 0; k < 200; ++k) {
      const double add = term / (g + 1 + 2 * k);
      head += add;
      if (std::fabs(add) < 1e-18 * std::fabs(head)) break;
      term *= q;
    }
    lo = c;
    if (lo >= a.S) return head;
  }
  auto f = [&](double s) {
    const double t = std::exp(s);
    return std::pow(t, g + 1) / (t * t + w * w);
  };
  const double sl = std::log(lo), sh = std::log(a.S), sw = std::log(w);
  std::vector<double> cuts{sl};
  if (sw > sl && sw < sh) cuts.push_back(sw);
  // keep the pieces short enough for the exponential tails
  std::vector<double> all;
  cuts.push_back(sh);
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const int parts = std::max(1, static_cast<int>(std::ceil((cuts[i + 1] - cuts[i]) / 8)));
    for (int k = 0; k < parts; ++k) all.push_back(cuts[i] + (cuts[i + 1] - cuts[i]) * k / parts);
  }
  all.push_back(sh);
  double sum = head;
  for (size_t i = 0; i + 1 < all.size(); ++i) sum += integrate_gk(f, all[i], all[i + 1], 1e-13).value;
  return sum;
}

double power_diff_envelope(double xi, double A, double B) {
  if (xi == 0) throw DomainError("xi must be nonzero");
  if (!(A > 0 && B > 0)) throw DomainError("A and B must be positive");
  const double d = std::fabs(A - B);
  if (xi > 0) return d * std::pow(std::max(A, B), xi - 1);
  return d * std::pow(std::min(A, B), xi + 1) / (A * B);
}

double poisson_envelope(const SettingId& s, double t, double x, double y, double T) {
  s.validate();
  require_interior(s, x, "x");
  require_interior(s, y, "y");
  if (!(t > 0)) throw DomainError("t must be positive");
  const bool shorttime = t <= T;
  const JacobiParams p = s.jp;
  const double nu = s.bo.nu;
  switch (s.variant) {
    case Variant::JacobiTrigPol:
    case Variant::JacobiTrigFun: {
      double e = shorttime ? jacobi_poisson_short(p, t, x, y) : std::exp(-t * std::fabs(p.alpha + p.beta + 1) / 2);
      if (s.variant == Variant::JacobiTrigFun) e *= jacobi_weight_factor(p, x, y);
      return e;
    }
    case Variant::JacobiScaled: {
      const double d = x - y;
      if (shorttime)
        return std::pow(std::sqrt(x * y) / (t + x + y), 2 * p.alpha + 1) *
               std::pow(std::sqrt((1 - x) * (1 - y)) / (t + 2 - x - y), 2 * p.beta + 1) * t / (t * t + d * d);
      return std::pow(x * y, p.alpha + 0.5) * std::pow((1 - x) * (1 - y), p.beta + 0.5) *
             std::exp(-t * kPi * std::fabs(p.alpha + p.beta + 1) / 2);
    }
    case Variant::FBNatural:
    case Variant::FBLebesgue: {
      double e;
      if (shorttime) {
        const double d = x - y;
        e = std::pow(t + x + y, -2 * nu - 1) * std::pow(t + 2 - x - y, -2.0) * t / (t * t + d * d);
      } else {
        e = std::exp(-t * eigensystem(s, 1)->sqrt_eig(0));
      }
      e *= (1 - x) * (1 - y);
      if (s.variant == Variant::FBLebesgue) e *= std::pow(x * y, nu + 0.5);
      return e;
    }
  }
  return 0.0;
}

double potential_envelope(const SettingId& s, double sigma, double x, double y) {
  s.validate();
  require_interior(s, x, "x");
  require_interior(s, y, "y");
  if (!(sigma > 0)) throw ParameterError("sigma must be positive");
  const JacobiParams p = s.jp;
  switch (s.variant) {
    case Variant::JacobiTrigPol: return jacobi_potential(p, sigma, x, y);
    case Variant::JacobiTrigFun: return jacobi_potential(p, sigma, x, y) * jacobi_weight_factor(p, x, y);
    case Variant::JacobiScaled: {
      const double th = kPi * x, ph = kPi * y;
      return jacobi_potential(p, sigma, th, ph) * jacobi_weight_factor(p, th, ph);
    }
    case Variant::FBNatural: return fb_potential(s.bo.nu, sigma, x, y);
    case Variant::FBLebesgue: return fb_potential(s.bo.nu, sigma, x, y) * std::pow(x * y, s.bo.nu + 0.5);
  }
  return 0.0;
}

double kernel_component(KernelFamily family, int i, JacobiParams p, double sigma, double th, double ph) {
  if (i < 1 || i > 6) throw IndexError("kernel component index must be 1..6");
  if (!(th > 0 && th < kPi && ph > 0 && ph < kPi)) throw DomainError("angles must lie in (0, pi)");
  const double a = th + ph, b = 2 * kPi - th - ph, d = std::fabs(th - ph);
  const double ea = p.alpha + 0.5, eb = p.beta + 0.5;
  if (family == KernelFamily::JacobiPol) {
    switch (i) {
      case 1: return 1.0;
      case 2: return same(sigma, p.alpha + 1) ? std::log(2 * kPi / a) : 0.0;
      case 3: return same(sigma, p.beta + 1) ? std::log(2 * kPi / b) : 0.0;
      case 4:
        return sigma > 0.5 + kIndicatorTol
                   ? std::pow(a, 2 * sigma - 2 * (p.alpha + 1)) * std::pow(b, 2 * sigma - 2 * (p.beta + 1))
                   : 0.0;
      case 5:
        if (!same(sigma, 0.5)) return 0.0;
        return d == 0 ? kInf : std::pow(a, -2 * ea) * std::pow(b, -2 * eb) * std::log(a * b / d);
      default:
        if (!(sigma < 0.5 - kIndicatorTol)) return 0.0;
        return d == 0 ? kInf : std::pow(a, -2 * ea) * std::pow(b, -2 * eb) * std::pow(d, 2 * sigma - 1);
    }
  }
  const double W = std::pow(th * ph, ea) * std::pow((kPi - th) * (kPi - ph), eb);
  const double G = std::pow(th * ph / (a * a), ea) * std::pow((kPi - th) * (kPi - ph) / (b * b), eb);
  switch (i) {
    case 1: return W;
    case 2: return same(sigma, p.alpha + 1) ? W * std::log(2 * kPi / a) : 0.0;
    case 3: return same(sigma, p.beta + 1) ? W * std::log(2 * kPi / b) : 0.0;
    case 4: return sigma > 0.5 + kIndicatorTol ? G * std::pow(a * b, 2 * sigma - 1) : 0.0;
    case 5:
      if (!same(sigma, 0.5)) return 0.0;
      return d == 0 ? kInf : G * std::log(a * b / d);
    default:
      if (!(sigma < 0.5 - kIndicatorTol)) return 0.0;
      return d == 0 ? kInf : G * std::pow(d, 2 * sigma - 1);
  }
}

double u_xi_kernel(JacobiParams p, double xi, double th, double ph) {
  if (!(xi > 0 && xi <= 1)) throw ParameterError("xi must lie in (0, 1]");
  if (th == ph) throw SingularityError("U_xi kernel is singular on the diagonal");
  const double r = std::fabs(th - ph);
  return std::pow(r, xi) / ball_measure(p, th, r);
}

std::vector<double> activation_thresholds(const SettingId& s) {
  if (s.is_jacobi()) return {0.5, s.jp.alpha + 1, s.jp.beta + 1};
  return {0.5, s.bo.nu + 1, 1.5};
}

bool near_activation(const SettingId& s, double sigma) {
  for (double th : activation_thresholds(s)) {
    const double d = std::fabs(sigma - th);
    if (d > kIndicatorTol && d < kNearThresholdTol) return true;
  }
  return false;
}

void EnvelopeBand::add(double r, const std::vector<double>& where) {
  if (!(std::isfinite(r) && r > 0)) {
    ++bad_count;
    return;
  }
  if (sample_count == 0 || r < lower_ratio) {
    lower_ratio = r;
    argmin = where;
  }
  if (sample_count == 0 || r > upper_ratio) {
    upper_ratio = r;
    argmax = where;
  }
  ++sample_count;
}

bool EnvelopeBand::ok() const {
  return bad_count == 0 && sample_count > 0 && lower_ratio > 0 && std::isfinite(upper_ratio);
}

std::vector<double> log_space(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = n == 1 ? a : std::exp(std::log(a) + (std::log(b) - std::log(a)) * i / (n - 1));
  return v;
}

namespace {

struct Sample {
  double r;
  std::vector<double> where;
};

EnvelopeBand collect(std::vector<std::vector<Sample>>& parts) {
  EnvelopeBand b;
  for (auto& v : parts)
    for (auto& s : v) b.add(s.r, s.where);
  return b;
}

}  // namespace

EnvelopeBand poisson_band(const PoissonBandSpec& spec) {
  const SettingId& s = spec.setting;
  s.validate();
  if (spec.ts.empty()) throw ParameterError("no t values");
  const auto xs = graded_points(s.length(), spec.grid, spec.grading);
  const double tmin = *std::min_element(spec.ts.begin(), spec.ts.end());
  KernelOptions opt;
  // headroom over the estimate so no pair falls back to the direct series
  const int est = detail::terms_estimate(s, detail::SeriesKind::Poisson, tmin, spec.tol);
  const int terms = std::min(est + est / 4 + 32, opt.n_max);
  const KernelTable table(s, xs, terms);
  const size_t n = xs.size();
  std::vector<std::vector<Sample>> parts(n);
  parallel_for(n, [&](size_t i) {
    for (size_t j = i; j < n; ++j)
      for (double t : spec.ts) {
        const auto kv = table.poisson(t, int(i), int(j), spec.tol, opt);
        // a value that is not resolved above its error bound is not a valid sample
        const double v = kv.value > kv.tail_bound ? kv.value : -1.0;
        parts[i].push_back({v / poisson_envelope(s, t, xs[i], xs[j], spec.T), {t, xs[i], xs[j]}});
      }
  });
  return collect(parts);
}

EnvelopeBand potential_band(const PotentialBandSpec& spec) {
  const PotentialSpec& ps = spec.potential;
  ps.validate();
  const SettingId& s = ps.setting;
  const auto xs = graded_points(s.length(), spec.grid, spec.grading);
  const size_t n = xs.size();
  const bool skip_diag = ps.sigma <= 0.5 + kIndicatorTol;
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j)
      if (!(skip_diag && i == j)) pairs.push_back({i, j});
  std::vector<std::vector<Sample>> parts(pairs.size());
  parallel_for(pairs.size(), [&](size_t k) {
    const double x = xs[pairs[k].first], y = xs[pairs[k].second];
    const auto kv = potential_kernel(ps, x, y, std::numeric_limits<double>::infinity());
    const double v = kv.tail_bound <= spec.rel_tol * kv.value ? kv.value : -1.0;
    parts[k].push_back({v / potential_envelope(s, ps.sigma, x, y), {x, y}});
  });
  return collect(parts);
}

double first_term_threshold(const SettingId& s, double rel, int grid, double t_lo, double t_hi) {
  s.validate();
  const auto xs = graded_points(s.length(), grid, 3.0);
  const auto es = eigensystem(s, 2);
  std::vector<double> v0(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) v0[i] = es->values(xs[i], 1)[0];
  const auto ladder = log_space(t_lo, t_hi, 60);
  for (double t : ladder) {
    bool good = true;
    for (size_t i = 0; i < xs.size() && good; ++i)
      for (size_t j = i; j < xs.size() && good; ++j) {
        const double first = std::exp(-t * es->eig(0)) * v0[i] * v0[j];
        const double full = heat_kernel(s, t, xs[i], xs[j], 1e-30).value;
        good = std::fabs(full / first - 1) <= rel;
      }
    if (good) return t;
  }
  throw ResolutionError("first-term approximation not reached within the t ladder");
}

}  // namespace spl
