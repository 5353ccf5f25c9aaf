#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "spl/envelopes.hpp"
#include "spl/mapping.hpp"
#include "spl/measures.hpp"
#include "spl/parallel.hpp"
#include "spl/quadrature.hpp"

namespace spl {

namespace {

constexpr double kTiny = 1e-300;

MeasureId probe_measure(const PotentialSpec& spec) {
  const Thresholds th = thresholds(spec.setting);
  return th.lebesgue ? MeasureId::lebesgue(kPi) : MeasureId::jacobi(th.transfer);
}

// integral of g over [a, b] where g may be singular at either end
double integrate_piece(const std::function<double(double)>& g, double a, double b) {
  if (!(b > a)) return 0.0;
  if (a > 0 && b / a > 16) {
    // many decades: integrate in log phi, a few chunks per decade group
    auto h = [&](double s) {
      const double x = std::exp(s);
      return g(x) * x;
    };
    const double la = std::log(a), lb = std::log(b);
    const int n = std::max(1, static_cast<int>(std::ceil((lb - la) / 8)));
    double sum = 0;
    for (int k = 0; k < n; ++k) sum += integrate_gk(h, la + (lb - la) * k / n, la + (lb - la) * (k + 1) / n, 1e-10, 12).value;
    return sum;
  }
  try {
    return integrate_ts([&](double x, double) { return g(x); }, a, b, 1e-10).value;
  } catch (const std::exception&) {
    return integrate_gk(g, a, b, 1e-10, 12).value;
  }
}

// integral over (0, pi) split at the given points
double integrate_split(const std::function<double(double)>& g, std::vector<double> pts) {
  pts.push_back(0);
  pts.push_back(kPi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double sum = 0;
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    if (pts[i] >= 0 && pts[i + 1] <= kPi) sum += integrate_piece(g, pts[i], pts[i + 1]);
  return sum;
}

double lp_of(const ExtremalCase& f, double p, const MeasureId& m) {
  if (std::isinf(p)) {
    double mx = 0;
    for (double x : graded_points(kPi, 400, 3.0)) mx = std::max(mx, std::fabs(f.f(x)));
    for (double b : f.breakpoints)
      for (double x : {b * (1 + 1e-9), b * (1 - 1e-9)})
        if (x > 0 && x < kPi) mx = std::max(mx, std::fabs(f.f(x)));
    return mx;
  }
  auto g = [&](double x) { return std::pow(std::fabs(f.f(x)), p) * density(m, x); };
  return std::pow(integrate_split(g, f.breakpoints), 1 / p);
}

double log_fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double band_of(const std::vector<double>& v) {
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  return *mx / *mn;
}

ExtremalCase cut_below(const ExtremalCase& f, double eta) {
  ExtremalCase c = f;
  auto g = f.f;
  c.f = [g, eta](double x) { return x > eta ? g(x) : 0.0; };
  c.breakpoints.push_back(eta);
  return c;
}

}  // namespace

ExtremalCase extremal_function(const std::string& id, const ExtremalParams& prm, double v) {
  prm.spec.validate();
  const Thresholds th = thresholds(prm.spec.setting);
  const double sg = prm.spec.sigma, delta = th.delta, k = th.kappa;
  const double x = prm.pq.inv_p, y = prm.pq.inv_q;
  ExtremalCase c;
  c.id = id;
  if (id == "E1") {
    if (!(v > 0 && v < kPi)) throw ParameterError("E1 needs 0 < eps < pi");
    c.f = [v](double t) { return t < v ? 1.0 : 0.0; };
    c.breakpoints = {v};
    c.law = "chi_(0,eps)";
  } else if (id == "E2") {
    if (!(sg < delta)) throw ParameterError("E2 needs sigma < delta");
    c.f = [sg](double t) { return t < 1 ? 1 / (std::pow(t, 2 * sg) * std::log(2 / t)) : 0.0; };
    c.breakpoints = {1};
    c.law = "chi_(0,1)(phi) / (phi^{2 sigma} log(2/phi))";
  } else if (id == "E3") {
    const double lim = x - sg / delta - y;
    if (!(v > 0 && v < lim))
      throw ParameterError("E3 needs 0 < eps < 1/p - sigma/delta - 1/q = " + fmt(lim));
    const double A = -2 * delta * x + 2 * delta * v;
    c.A = A;
    c.f = [A](double t) { return t < 1 ? std::pow(t, A) : 0.0; };
    c.breakpoints = {1};
    c.law = "phi^A chi_(0,1), A = -2 delta/p + 2 delta eps";
  } else if (id == "E4") {
    if (!(sg < 0.5)) throw ParameterError("E4 needs sigma < 1/2");
    c.f = [sg](double t) {
      if (!(t > 0.5 && t < 1)) return 0.0;
      return 1 / (std::pow(1 - t, 2 * sg) * std::log(2 / (1 - t)));
    };
    c.breakpoints = {0.5, 1};
    c.law = "chi_(1/2,1)(phi) / ((1-phi)^{2 sigma} log(2/(1-phi)))";
  } else if (id == "E5") {
    const double lim = x - 2 * sg - y;
    if (!(v > 0 && v < lim))
      throw ParameterError("E5 needs 0 < eps < 1/p - 2 sigma - 1/q = " + fmt(lim));
    const double A = -x + v;
    c.A = A;
    c.f = [A](double t) { return t > 0.5 && t < 1 ? std::pow(1 - t, A) : 0.0; };
    c.breakpoints = {0.5, 1};
    c.law = "(1-phi)^A chi_(1/2,1), A = -1/p + eps";
  } else if (id == "E6") {
    if (!(v > 0 && v < 0.5)) throw ParameterError("E6 needs 0 < eps < 1/2");
    c.f = [v](double t) { return t > 1 - v && t < 1 ? 1.0 : 0.0; };
    c.breakpoints = {1 - v, 1};
    c.law = "chi_(1-eps,1)";
  } else if (id == "E7") {
    if (!(k < 0)) throw ParameterError("E7 needs kappa < 0");
    c.f = [k](double t) { return t < 1 ? 1 / (std::pow(t, 1 + k) * std::log(2 / t)) : 0.0; };
    c.breakpoints = {1};
    c.law = "chi_(0,1)(phi) / (phi^{1+kappa} log(2/phi))";
  } else if (id == "E8") {
    if (!(k < 0 && sg < k + 0.5)) throw ParameterError("E8 needs kappa < 0 and sigma < kappa + 1/2");
    c.f = [k, sg](double t) { return t < 2 ? std::pow(t, k - 2 * sg) / std::log(kPi / t) : 0.0; };
    c.breakpoints = {2};
    c.law = "chi_(0,2)(phi) phi^{kappa - 2 sigma} / log(pi/phi)";
  } else {
    throw ParameterError("unknown extremal case '" + id + "' (E1..E8)");
  }
  return c;
}

double apply_probe_operator(const ProbeOperator& op, const ExtremalCase& f, double theta) {
  const PotentialSpec& spec = op.spec;
  const Thresholds th = thresholds(spec.setting);
  const MeasureId m = probe_measure(spec);
  if (!(theta > 0 && theta < kPi)) throw DomainError("theta must lie in (0, pi)");
  std::function<double(double)> K;
  if (op.component == 0) {
    if (!spec.setting.is_jacobi() || spec.setting.variant == Variant::JacobiScaled)
      throw ParameterError("full-kernel probes run on the pol and fun Jacobi settings");
    K = [&](double phi) { return potential_kernel(spec, theta, phi, 1e-10).value; };
  } else {
    const KernelFamily fam = th.lebesgue ? KernelFamily::JacobiFun : KernelFamily::JacobiPol;
    K = [&, fam](double phi) { return kernel_component(fam, op.component, th.transfer, spec.sigma, theta, phi); };
  }
  auto g = [&](double phi) {
    if (phi <= 0 || phi >= kPi || phi == theta) return 0.0;
    const double fv = f.f(phi);
    if (fv == 0) return 0.0;
    return K(phi) * fv * density(m, phi);
  };
  std::vector<double> pts = f.breakpoints;
  for (double p : {theta, theta / 2, std::min(2 * theta, kPi)}) pts.push_back(p);
  return integrate_split(g, pts);
}

ProbeReport blowup_probe(const ProbeSpec& ps) {
  if (ps.ladder.size() < 2) throw ParameterError("probe ladder needs at least two values");
  for (size_t i = 1; i < ps.ladder.size(); ++i)
    if (!(ps.ladder[i] < ps.ladder[i - 1])) throw ParameterError("probe ladder must decrease");
  const PotentialSpec& spec = ps.op.spec;
  const MeasureId m = probe_measure(spec);
  const double p = ps.pq.inv_p == 0 ? std::numeric_limits<double>::infinity() : 1 / ps.pq.inv_p;
  const double q = ps.pq.inv_q == 0 ? std::numeric_limits<double>::infinity() : 1 / ps.pq.inv_q;
  ProbeReport r;
  r.ladder = ps.ladder;
  const size_t n = ps.ladder.size();
  r.input_norm.resize(n);
  r.output_norm.resize(n);
  ExtremalParams prm{spec, ps.pq};

  if (ps.kind == ProbeKind::PartialNormExponent) {
    // Tf sampled on a log grid on one side of the singular point, integrated in the log variable
    const ExtremalCase f = extremal_function(ps.case_id, prm, ps.case_param);
    const double s0 = ps.singular_point;
    const double dmin = ps.ladder.back() / 4, dmax = 0.5;
    const int pts = static_cast<int>(std::ceil(std::log2(dmax / dmin) * 8)) + 1;
    const auto ds = log_space(dmin, dmax, pts);
    std::vector<double> vals(ds.size());
    parallel_for(ds.size(), [&](size_t i) {
      const double th = s0 + ds[i];
      vals[i] = std::pow(std::fabs(apply_probe_operator(ps.op, f, th)), q) * density(m, th) * ds[i];
    });
    const double in = lp_of(f, p, m);
    for (size_t k = 0; k < n; ++k) {
      double sum = 0;
      for (size_t i = 0; i + 1 < ds.size(); ++i) {
        if (ds[i + 1] <= ps.ladder[k]) continue;
        const double a = std::max(std::log(ds[i]), std::log(ps.ladder[k])), b = std::log(ds[i + 1]);
        // trapezoid in log distance
        const double w = (b - a) / (std::log(ds[i + 1]) - std::log(ds[i]));
        const double va = vals[i] + (vals[i + 1] - vals[i]) * (1 - w);
        sum += 0.5 * (va + vals[i + 1]) * (b - a);
      }
      r.input_norm[k] = in;
      r.output_norm[k] = sum;
    }
    r.ratio = r.output_norm;
    r.law_ratio = r.ratio;
    r.band = band_of(r.ratio);
    r.fitted = log_fit_slope(r.ladder, r.output_norm);
    r.predicted = ps.predicted_exponent;
    r.confirmed = r.predicted < 0 && std::fabs(r.fitted - r.predicted) <= 0.15 * std::fabs(r.predicted);
    r.verdict = r.confirmed ? "divergence exponent confirmed" : "divergence exponent not matched";
    return r;
  }

  parallel_for(n, [&](size_t k) {
    const double v = ps.ladder[k];
    ExtremalCase f;
    if (ps.kind == ProbeKind::PartialSupDivergence)
      f = cut_below(extremal_function(ps.case_id, prm, ps.case_param), v);
    else
      f = extremal_function(ps.case_id, prm, v);
    r.input_norm[k] = lp_of(f, p, m);
    double out = 0;
    if (ps.kind == ProbeKind::PartialSupDivergence && ps.theta0 > 0) {
      out = apply_probe_operator(ps.op, f, ps.theta0);
    } else if (std::isinf(q)) {
      std::vector<double> th = log_space(std::min(1e-3 * v, 1e-6), kPi * (1 - 1e-9), 48);
      for (double b : f.breakpoints)
        for (double x : {b * 0.999, b * 1.001}) th.push_back(x);
      for (double t : th)
        if (t > 0 && t < kPi) out = std::max(out, std::fabs(apply_probe_operator(ps.op, f, t)));
    } else {
      // Lq norm of Tf: log grids toward 0, toward pi and around the support edges
      std::vector<double> th;
      for (double t : log_space(1e-8 * v, kPi / 2, 160)) th.push_back(t);
      for (double t : log_space(1e-8, kPi / 2, 60)) th.push_back(kPi - t);
      for (double b : f.breakpoints)
        for (double t : log_space(1e-6 * b, 0.5 * b, 40))
          for (double x : {b - t, b + t}) th.push_back(x);
      std::sort(th.begin(), th.end());
      th.erase(std::remove_if(th.begin(), th.end(), [](double t) { return !(t > 0 && t < kPi); }), th.end());
      th.erase(std::unique(th.begin(), th.end()), th.end());
      std::vector<double> g(th.size());
      for (size_t i = 0; i < th.size(); ++i)
        g[i] = std::pow(std::fabs(apply_probe_operator(ps.op, f, th[i])), q) * density(m, th[i]);
      // first cell: Tf taken constant on (0, th[0])
      double sum = g[0] / std::max(density(m, th[0]), kTiny) * cumulative_measure(m, th[0]);
      for (size_t i = 0; i + 1 < th.size(); ++i) sum += 0.5 * (g[i] + g[i + 1]) * (th[i + 1] - th[i]);
      out = std::pow(sum, 1 / q);
    }
    r.output_norm[k] = out;
  });
  r.ratio.resize(n);
  r.law_ratio.resize(n);
  for (size_t k = 0; k < n; ++k) {
    r.ratio[k] = ps.kind == ProbeKind::PartialSupDivergence ? r.output_norm[k] : r.output_norm[k] / r.input_norm[k];
    r.law_ratio[k] = ps.law ? r.ratio[k] / ps.law(ps.ladder[k]) : r.ratio[k];
  }
  r.band = band_of(r.law_ratio);
  if (ps.kind == ProbeKind::LqRatio) {
    r.fitted = log_fit_slope(r.ladder, r.ratio);
    r.confirmed = r.band <= 2.0;
    r.verdict = r.confirmed ? "bounded" : "ratio not bounded within a factor-2 band";
    return r;
  }
  // growth: the ratio must increase along the ladder and follow the predicted law
  const bool grows = r.ratio.back() > 1.5 * r.ratio.front();
  r.fitted = log_fit_slope(r.ladder, r.ratio);
  r.confirmed = grows && r.band <= 2.0 && n >= 5;
  r.verdict = r.confirmed ? (ps.kind == ProbeKind::PartialSupDivergence ? "divergence confirmed" : "blowup confirmed")
                          : "not confirmed";
  return r;
}

namespace {

PotentialSpec jacobi_spec(Variant v, double a, double b, double sigma) {
  PotentialSpec p;
  p.setting = {v, {a, b}, {}};
  p.sigma = sigma;
  return p;
}

double loglog_law(double eta) { return std::log(std::log(2 / eta)) - std::log(std::log(2.0)); }

}  // namespace

std::vector<NamedProbe> sharpness_probe_suite() {
  std::vector<NamedProbe> out;
  {
    ProbeSpec s;
    s.op = {jacobi_spec(Variant::JacobiTrigPol, 0, 0, 1), 2};
    s.case_id = "E1";
    s.pq = ExponentPair::from_pq(1, std::numeric_limits<double>::infinity());
    for (int k = 4; k <= 12; ++k) s.ladder.push_back(std::ldexp(1.0, -k));
    s.law = [](double e) { return std::log(2 * kPi / e); };
    out.push_back({"T2-E1", "pol(0,0) sigma=1, component 2 on chi_(0,eps): sup ratio ~ log(2 pi/eps)", s});
  }
  {
    // eta stops at 1e-64: below that phi^{2 sigma} and the density leave double range
    ProbeSpec s;
    s.op = {jacobi_spec(Variant::JacobiTrigPol, 0.5, 0, 1), 4};
    s.case_id = "E2";
    s.pq = {2.0 / 3, 0};
    s.kind = ProbeKind::PartialSupDivergence;
    s.theta0 = 1e-200;
    for (int k = 1; k <= 6; ++k) s.ladder.push_back(std::pow(10.0, -std::ldexp(1.0, k)));
    s.law = loglog_law;
    out.push_back({"T4-E2", "pol(1/2,0) sigma=1, component 4 on E2 cut below eta: grows like log log(2/eta)", s});
  }
  {
    ProbeSpec s;
    s.op = {jacobi_spec(Variant::JacobiTrigFun, -0.7, 0, 0.2), 1};
    s.case_id = "E7";
    s.pq = {0.8, 0.5};
    s.kind = ProbeKind::PartialSupDivergence;
    s.theta0 = 1;
    for (int k = 1; k <= 8; ++k) s.ladder.push_back(std::pow(10.0, -std::ldexp(1.0, k)));
    s.law = loglog_law;
    out.push_back({"TT1-E7", "fun(-0.7,0) sigma=0.2, component 1 on E7 cut below eta, at theta=1", s});
  }
  {
    const double p = 1.1, q = 8, eps = 0.05, delta = 1.5, sigma = 1, alpha = 0.5;
    ProbeSpec s;
    s.op = {jacobi_spec(Variant::JacobiTrigPol, alpha, 0, sigma), 4};
    s.case_id = "E3";
    s.pq = ExponentPair::from_pq(p, q);
    s.kind = ProbeKind::PartialNormExponent;
    s.case_param = eps;
    const double A = -2 * delta / p + 2 * delta * eps;
    s.predicted_exponent = (2 * sigma + A) * q + 2 * alpha + 2;
    s.singular_point = 0;
    for (int k = 2; k <= 6; ++k) s.ladder.push_back(std::pow(10.0, -k));
    out.push_back({"T4-E3", "pol(1/2,0) sigma=1, component 4 on phi^A: int_eta |Tf|^q dmu ~ eta^e", s});
  }
  {
    const double p = 1.1, q = 8, eps = 0.05, sigma = 0.25, alpha = -0.5;
    ProbeSpec s;
    s.op = {jacobi_spec(Variant::JacobiTrigPol, alpha, -0.6, sigma), 6};
    s.case_id = "E5";
    s.pq = ExponentPair::from_pq(p, q);
    s.kind = ProbeKind::PartialNormExponent;
    s.case_param = eps;
    const double A = -1 / p + eps;
    s.predicted_exponent = (2 * sigma + A) * q + 2 * alpha + 2;
    s.singular_point = 1;
    for (int k = 2; k <= 6; ++k) s.ladder.push_back(std::pow(10.0, -k));
    out.push_back({"T6-E5", "pol(-1/2,-0.6) sigma=1/4, component 6 on (1-phi)^A: exponent at 1+", s});
  }
  // strong type on the open critical segment 1/q = 1/p - sigma/delta
  for (double x : {0.7, 0.75, 0.8, 0.9, 0.95}) {
    ProbeSpec s;
    s.op = {jacobi_spec(Variant::JacobiTrigPol, 0.5, 0, 1), 4};
    s.case_id = "E1";
    s.pq = {x, x - 2.0 / 3};
    s.kind = ProbeKind::LqRatio;
    for (int k = 3; k <= 10; ++k) s.ladder.push_back(std::ldexp(1.0, -k));
    char id[32];
    std::snprintf(id, sizeof id, "crit-%.2f", x);
    out.push_back({id, "pol(1/2,0) sigma=1, component 4 on chi_(0,eps): bounded Lp-Lq ratio", s});
  }
  return out;
}

}  // namespace spl
