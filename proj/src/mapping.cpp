#include "spl/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>

namespace spl {

namespace {

bool eq(double a, double b) { return std::fabs(a - b) <= kBoundaryTol; }
bool lt(double a, double b) { return a < b - kBoundaryTol; }
bool gt(double a, double b) { return a > b + kBoundaryTol; }
bool ge(double a, double b) { return !lt(a, b); }

using MT = MappingType;

LevelBounds exact(MT t) { return {t, t}; }

// Pol-type classification in terms of delta: strong on and above the line
// 1/q = 1/p - sigma/delta, weak at its left end, restricted weak at its right end.
LevelBounds pol_bounds(double delta, double sigma, double x, double y) {
  if (gt(sigma, delta)) return exact(MT::Strong);
  if (eq(sigma, delta)) return exact(eq(x, 1) && eq(y, 0) ? MT::None : MT::Strong);
  const double c = sigma / delta;
  if (eq(x, 1) && eq(y, 1 - c)) return exact(MT::Weak);
  if (eq(x, c) && eq(y, 0)) return exact(MT::RestrictedWeak);
  return exact(ge(y, x - c) ? MT::Strong : MT::None);
}

LevelBounds fun_bounds(double kappa, double sigma, double x, double y, const ClassifierOptions& opt) {
  if (ge(kappa, 0)) {
    // same picture as the pol case with sigma/delta replaced by 2 sigma
    return pol_bounds(0.5, sigma, x, y);
  }
  const double s = kappa + 0.5;
  const double xr = 1 + kappa, yl = -kappa;
  if (!lt(sigma, s)) {
    const bool b2 = eq(sigma, s);
    if (lt(x, xr) && gt(y, yl)) return exact(MT::Strong);
    if (eq(y, yl) && lt(x, xr)) return exact(MT::Weak);
    if (eq(x, xr) && ge(y, yl)) {
      if (b2 && eq(y, yl) && !opt.drop_b2_exception) return exact(MT::None);
      return exact(MT::RestrictedWeak);
    }
    return exact(MT::None);
  }
  const double xc = 2 * sigma - kappa;
  if (lt(x, xr) && gt(y, yl) && ge(y, x - 2 * sigma)) return exact(MT::Strong);
  if (eq(y, yl) && lt(x, xc)) return exact(MT::Weak);
  if (eq(y, yl) && eq(x, xc)) return exact(MT::RestrictedWeak);
  if (eq(x, xr) && ge(y, 1 + kappa - 2 * sigma)) return exact(MT::RestrictedWeak);
  return exact(MT::None);
}

}  // namespace

std::string mapping_type_name(MappingType t) {
  switch (t) {
    case MT::Strong: return "Strong";
    case MT::Weak: return "Weak";
    case MT::RestrictedWeak: return "RestrictedWeak";
    case MT::None: return "None";
    case MT::Unstated: return "Unstated";
  }
  return "?";
}

MappingType parse_mapping_type(const std::string& s) {
  for (MT t : {MT::Strong, MT::Weak, MT::RestrictedWeak, MT::None, MT::Unstated})
    if (mapping_type_name(t) == s) return t;
  throw ParameterError("unknown mapping type '" + s + "'");
}

ExponentPair ExponentPair::from_pq(double p, double q) {
  if (!(p >= 1) || !(q >= 1)) throw ParameterError("p and q must be at least 1 (inf allowed)");
  ExponentPair e{std::isinf(p) ? 0.0 : 1 / p, std::isinf(q) ? 0.0 : 1 / q};
  return e;
}

void ExponentPair::validate() const {
  if (!(inv_p >= 0 && inv_p <= 1 && inv_q >= 0 && inv_q <= 1))
    throw ParameterError("1/p and 1/q must lie in [0, 1]");
}

Thresholds thresholds(const SettingId& s) {
  s.validate();
  Thresholds t;
  switch (s.variant) {
    case Variant::JacobiTrigPol: t.transfer = s.jp; break;
    case Variant::JacobiTrigFun:
    case Variant::JacobiScaled:
      t.transfer = s.jp;
      t.lebesgue = true;
      break;
    case Variant::FBNatural: t.transfer = {s.bo.nu, -0.5}; break;
    case Variant::FBLebesgue:
      t.transfer = {s.bo.nu, 0.5};
      t.lebesgue = true;
      break;
  }
  const JacobiParams& p = t.transfer;
  t.delta = std::max({p.alpha + 1, p.beta + 1, 0.5});
  t.kappa = std::min(p.alpha + 0.5, p.beta + 0.5);
  t.eta = s.is_fb() ? std::max(s.bo.nu + 1, 0.5) : t.delta;
  return t;
}

LevelBounds literal_bounds(const PotentialSpec& spec, ExponentPair pq, const ClassifierOptions& opt) {
  spec.validate();
  pq.validate();
  const Thresholds th = thresholds(spec.setting);
  if (th.lebesgue) return fun_bounds(th.kappa, spec.sigma, pq.inv_p, pq.inv_q, opt);
  return pol_bounds(th.delta, spec.sigma, pq.inv_p, pq.inv_q);
}

MappingType classify(const PotentialSpec& spec, ExponentPair pq, const ClassifierOptions& opt) {
  const LevelBounds b = literal_bounds(spec, pq, opt);
  if (b.lower == b.upper) return b.lower;
  if (opt.mode == ClassifyMode::Strict) return MT::Unstated;
  // the observations only ever push the level up from what is proved
  return b.lower;
}

bool near_boundary(const PotentialSpec& spec, ExponentPair pq) {
  const Thresholds th = thresholds(spec.setting);
  const double x = pq.inv_p, y = pq.inv_q, sg = spec.sigma;
  std::vector<double> d;  // distances to every line or corner where the classification can change
  auto corner = [&](double a, double b) { d.push_back(std::max(std::fabs(x - a), std::fabs(y - b))); };
  if (!th.lebesgue || th.kappa >= 0) {
    const double c = th.lebesgue ? 2 * sg : sg / th.delta;
    d.push_back(y - (x - c));
    corner(1, 1 - c);
    corner(c, 0);
    corner(1, 0);
  } else {
    const double k = th.kappa;
    d.push_back(x - (1 + k));
    d.push_back(y + k);
    d.push_back(y - (x - 2 * sg));
    d.push_back(x - (2 * sg - k));
    d.push_back(y - (1 + k - 2 * sg));
  }
  for (double v : d) {
    const double a = std::fabs(v);
    if (a > kBoundaryTol && a < kNearBoundaryTol) return true;
  }
  return false;
}

std::vector<Disproof> disproof_catalog(const PotentialSpec& spec) {
  spec.validate();
  const Thresholds th = thresholds(spec.setting);
  const JacobiParams p = th.transfer;
  const double sg = spec.sigma;
  std::vector<Disproof> out;
  auto add = [&](std::string id, std::string comp, std::string fn, double x, double y, MT t, std::string note) {
    out.push_back({std::move(id), std::move(comp), std::move(fn), {x, y}, t, std::move(note)});
  };
  // sample points strictly below a line y = x - c
  auto below = [&](const std::string& id, const std::string& comp, const std::string& fn, double c) {
    for (double x : {0.3, 0.6, 0.9, 1.0}) {
      for (double gap : {0.05, 0.2}) {
        const double y = x - c - gap;
        if (y >= 0 && x <= 1) add(id, comp, fn, x, y, MT::RestrictedWeak, "below the critical line");
      }
    }
  };
  if (!th.lebesgue) {
    const double delta = th.delta;
    if (eq(sg, p.alpha + 1) || eq(sg, p.beta + 1))
      add("D-pol-2", eq(sg, p.alpha + 1) ? "pol-2" : "pol-3", "E1", 1, 0, MT::RestrictedWeak,
          "log term fails restricted weak (1, inf)");
    if (eq(sg, 0.5) && eq(delta, 0.5))
      add("D-pol-5a", "pol-5", "E6", 1, 0, MT::RestrictedWeak, "diagonal log fails restricted weak (1, inf)");
    if (lt(sg, delta)) {
      const double c = sg / delta;
      if (gt(delta, 0.5)) {
        // endpoint behaviour: pol-4 (or pol-5 / pol-6, which dominate it from below)
        const char* comp = gt(sg, 0.5) ? "pol-4" : (eq(sg, 0.5) ? "pol-5" : "pol-6");
        add("D-pol-E2", comp, "E2", c, 0, MT::Weak, "not weak (delta/sigma, inf)");
        add("D-pol-E2dual", comp, "E2", 1, 1 - c, MT::Strong, "not strong (1, delta/(delta-sigma)) by duality");
        below("D-pol-E3", comp, "E3", c);
      } else {
        add("D-pol-E4", "pol-6", "E4", c, 0, MT::Weak, "not weak (1/(2 sigma), inf)");
        add("D-pol-E4dual", "pol-6", "E4", 1, 1 - c, MT::Strong, "not strong (1, 1/(1-2 sigma)) by duality");
        below("D-pol-E5", "pol-6", "E5", c);
      }
    }
    return out;
  }
  const double k = th.kappa;
  if (ge(k, 0)) {
    if (eq(sg, 0.5)) add("D-fun-5", "fun-5", "E6", 1, 0, MT::RestrictedWeak, "fails restricted weak (1, inf)");
    if (lt(sg, 0.5)) {
      add("D-fun-E4", "fun-6", "E4", 2 * sg, 0, MT::Weak, "not weak (1/(2 sigma), inf)");
      add("D-fun-E4dual", "fun-6", "E4", 1, 1 - 2 * sg, MT::Strong, "not strong (1, 1/(1-2 sigma))");
      below("D-fun-E5", "fun-6", "E5", 2 * sg);
    }
    return out;
  }
  // kappa < 0: fun-1 carries the endpoint behaviour
  for (double x : {0.0, 0.5 * (1 + k), 1 + k - 0.01})
    if (x >= 0) add("D-fun-1-strong", "fun-1", "chi(0,1)", x, -k, MT::Strong, "not strong (p, 1/(-kappa))");
  for (double y : {-k, 0.5 * (1 - k), 1.0})
    add("D-fun-E7", "fun-1", "E7", 1 + k, y, MT::Weak, "not weak (1/(1+kappa), q)");
  for (double x : {1 + k + 0.5 * (-k), 1.0}) add("D-fun-1-right", "fun-1", "E1", x, 0.9, MT::RestrictedWeak, "1/p > 1+kappa");
  for (double y : {0.0, 0.5 * (-k)}) add("D-fun-1-low", "fun-1", "E1", 0.2 * (1 + k), y, MT::RestrictedWeak, "1/q < -kappa");
  if (eq(sg, k + 0.5))
    add("D-fun-2-corner", p.alpha <= p.beta ? "fun-2" : "fun-3", "E1", 1 + k, -k, MT::RestrictedWeak,
        "log term fails restricted weak at the corner");
  if (lt(sg, k + 0.5)) {
    add("D-fun-E8", "fun-6", "E8", 2 * sg - k, -k, MT::Weak, "not weak (1/(2 sigma - kappa), 1/(-kappa))");
    below("D-fun-6-below", "fun-6", "E5", 2 * sg);
  }
  return out;
}

namespace {

void rule(std::vector<AuditViolation>& v, const char* r, ExponentPair a, ExponentPair b, const std::string& what) {
  if (v.size() < 200) v.push_back({r, a, b, what});
}

}  // namespace

std::vector<AuditViolation> consistency_audit(const PotentialSpec& spec, int resolution,
                                              const ClassifierOptions& opt) {
  spec.validate();
  if (resolution < 2) throw ParameterError("audit resolution must be at least 2");
  const Thresholds th = thresholds(spec.setting);
  const double sg = spec.sigma, k = th.kappa;
  // grid coordinates plus every special abscissa/ordinate and their reflections
  std::set<double> cs;
  for (int i = 0; i < resolution; ++i) cs.insert(double(i) / (resolution - 1));
  for (double v : {sg / th.delta, 2 * sg, 1 + k, -k, 2 * sg - k, 1 + k - 2 * sg, 1 - sg / th.delta, 1 - 2 * sg})
    for (double w : {v, 1 - v})
      if (w > -kBoundaryTol && w < 1 + kBoundaryTol) cs.insert(std::clamp(w, 0.0, 1.0));
  std::vector<double> c(cs.begin(), cs.end());
  // merge values that the classifier cannot tell apart
  c.erase(std::unique(c.begin(), c.end(), [](double a, double b) { return std::fabs(a - b) <= kBoundaryTol; }),
          c.end());
  const size_t n = c.size();
  std::vector<MT> lv(n * n);
  std::vector<AuditViolation> out;
  auto at = [&](size_t i, size_t j) { return lv[i * n + j]; };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      lv[i * n + j] = classify(spec, {c[i], c[j]}, opt);
      if (lv[i * n + j] == MT::Unstated && opt.mode == ClassifyMode::Resolved)
        rule(out, "totality", {c[i], c[j]}, {c[i], c[j]}, "no type assigned");
    }
  auto lvl = [](MT t) { return static_cast<int>(t); };

  // (A) and order coherence: levels do not increase when p grows or q shrinks.
  // Checking the two nearest neighbours suffices for a monotone staircase.
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      const MT t = at(i, j);
      if (t == MT::Unstated) continue;
      if (i > 0 && at(i - 1, j) != MT::Unstated && lvl(at(i - 1, j)) < lvl(t))
        rule(out, "A", {c[i], c[j]}, {c[i - 1], c[j]},
             mapping_type_name(t) + " here but " + mapping_type_name(at(i - 1, j)) + " at larger p");
      if (j + 1 < n && at(i, j + 1) != MT::Unstated && lvl(at(i, j + 1)) < lvl(t))
        rule(out, "A", {c[i], c[j]}, {c[i], c[j + 1]},
             mapping_type_name(t) + " here but " + mapping_type_name(at(i, j + 1)) + " at smaller q");
    }

  // (B)/(D) duality: strong (p,q) <=> strong (q',p')
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (at(i, j) != MT::Strong) continue;
      const ExponentPair d{1 - c[j], 1 - c[i]};
      if (classify(spec, d, opt) != MT::Strong)
        rule(out, "B", {c[i], c[j]}, d, "strong type is not closed under duality");
    }
  // (B) interpolation from strong (1, q)
  for (size_t j = 0; j < n; ++j) {
    if (at(n - 1, j) != MT::Strong) continue;
    const double off = 1 - c[j];
    for (size_t i = 0; i < n; ++i)
      for (size_t jj = 0; jj < n; ++jj)
        if (ge(c[jj], c[i] - off) && at(i, jj) != MT::Strong)
          rule(out, "B", {1, c[j]}, {c[i], c[jj]}, "strong (1,q) should interpolate to this pair");
  }
  // (C) weak (1,q), 1<q<inf: restricted weak (q',inf) and strong on the open segment
  for (size_t j = 0; j < n; ++j) {
    if (!(c[j] > 0 && c[j] < 1) || lvl(at(n - 1, j)) < lvl(MT::Weak)) continue;
    const double off = 1 - c[j];
    if (lvl(classify(spec, {off, 0}, opt)) < lvl(MT::RestrictedWeak))
      rule(out, "C", {1, c[j]}, {off, 0}, "weak (1,q) needs restricted weak (q',inf)");
    for (int m = 1; m < 16; ++m) {
      const double x = off + (1 - off) * m / 16.0;
      const ExponentPair e{x, x - off};
      if (classify(spec, e, opt) != MT::Strong) rule(out, "C", {1, c[j]}, e, "open segment should be strong");
    }
  }
  // (D) weak (p, inf) is strong (p, inf) and gives strong (1, p')
  for (size_t i = 0; i < n; ++i) {
    const MT t = at(i, 0);
    if (t == MT::Weak) rule(out, "D", {c[i], 0}, {c[i], 0}, "weak type (p, inf) coincides with strong type");
    if ((t == MT::Weak || t == MT::Strong) && c[i] > 0 && classify(spec, {1, 1 - c[i]}, opt) != MT::Strong)
      rule(out, "D", {c[i], 0}, {1, 1 - c[i]}, "strong (p, inf) should give strong (1, p')");
  }
  // known counterexamples
  for (const auto& d : disproof_catalog(spec)) {
    const MT t = classify(spec, d.at, opt);
    if (t != MT::Unstated && lvl(t) >= lvl(d.disproved))
      rule(out, "disproof", d.at, d.at,
           d.id + " (" + d.function_id + " on " + d.component + ") rules out " + mapping_type_name(d.disproved) +
               " but the classifier says " + mapping_type_name(t));
  }
  return out;
}

void write_region_grid_csv(std::ostream& os, const PotentialSpec& spec, int resolution,
                           const ClassifierOptions& opt) {
  if (resolution < 8) throw ParameterError("region grid resolution must be at least 8");
  os << "inv_p,inv_q,type\n";
  const auto old = os.precision(17);
  for (int i = 0; i < resolution; ++i)
    for (int j = 0; j < resolution; ++j) {
      const double x = double(i) / (resolution - 1), y = double(j) / (resolution - 1);
      os << x << ',' << y << ',' << mapping_type_name(classify(spec, {x, y}, opt)) << '\n';
    }
  os.precision(old);
}

void write_gnuplot_script(std::ostream& os, const std::string& csv_path, const std::string& title) {
  os << "set datafile separator ','\n"
     << "set title '" << title << "'\n"
     << "set xlabel '1/p'\nset ylabel '1/q'\n"
     << "set xrange [0:1]\nset yrange [0:1]\nset size square\nset key outside\n"
     << "plot '" << csv_path << "' using 1:(strcol(3) eq 'Strong' ? $2 : 1/0) skip 1 with points pt 5 ps 0.5 title 'Strong', \\\n"
     << "     '' using 1:(strcol(3) eq 'Weak' ? $2 : 1/0) skip 1 with points pt 7 ps 1 title 'Weak', \\\n"
     << "     '' using 1:(strcol(3) eq 'RestrictedWeak' ? $2 : 1/0) skip 1 with points pt 9 ps 1 title 'Restricted weak'\n";
}

}  // namespace spl
