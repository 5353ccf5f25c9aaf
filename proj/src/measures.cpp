#include "spl/measures.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "spl/quadrature.hpp"

namespace spl {

namespace {
constexpr int kCellNodes = 8;
}

double MeasureId::left_exponent() const {
  switch (kind) {
    case Kind::JacobiMu: return 2 * jp.alpha + 1;
    case Kind::BesselMu: return 2 * nu + 1;
    default: return 0.0;
  }
}

double MeasureId::right_exponent() const {
  return kind == Kind::JacobiMu ? 2 * jp.beta + 1 : 0.0;
}

MeasureId measure_of(const SettingId& s) {
  switch (s.variant) {
    case Variant::JacobiTrigPol: return MeasureId::jacobi(s.jp);
    case Variant::JacobiTrigFun: return MeasureId::lebesgue(kPi);
    case Variant::FBNatural: return MeasureId::bessel(s.bo.nu);
    default: return MeasureId::lebesgue(1.0);
  }
}

double density_lr(const MeasureId& m, double dl, double dr) {
  switch (m.kind) {
    case MeasureId::Kind::JacobiMu:
      return std::pow(std::sin(0.5 * dl), 2 * m.jp.alpha + 1) * std::pow(std::sin(0.5 * dr), 2 * m.jp.beta + 1);
    case MeasureId::Kind::BesselMu:
      return std::pow(dl, 2 * m.nu + 1);
    default:
      return 1.0;
  }
}

double density(const MeasureId& m, double x) {
  if (!(x > 0.0 && x < m.length)) throw DomainError("density argument must lie inside the interval");
  return density_lr(m, x, m.length - x);
}

double total_mass(const MeasureId& m) {
  switch (m.kind) {
    case MeasureId::Kind::JacobiMu:
      return std::exp(std::lgamma(m.jp.alpha + 1) + std::lgamma(m.jp.beta + 1) -
                      std::lgamma(m.jp.alpha + m.jp.beta + 2));
    case MeasureId::Kind::BesselMu:
      return 1.0 / (2 * m.nu + 2);
    default:
      return m.length;
  }
}

double cumulative_measure(const MeasureId& m, double x) {
  if (x <= 0) return 0.0;
  if (x >= m.length) return total_mass(m);
  switch (m.kind) {
    case MeasureId::Kind::JacobiMu: {
      const double s = std::sin(0.5 * x);
      return total_mass(m) * boost::math::ibeta(m.jp.alpha + 1, m.jp.beta + 1, s * s);
    }
    case MeasureId::Kind::BesselMu:
      return std::pow(x, 2 * m.nu + 2) / (2 * m.nu + 2);
    default:
      return x;
  }
}

double cumulative_measure_right(const MeasureId& m, double x) {
  if (x >= m.length) return 0.0;
  if (x <= 0) return total_mass(m);
  switch (m.kind) {
    case MeasureId::Kind::JacobiMu: {
      const double c = std::sin(0.5 * (kPi - x));
      return total_mass(m) * boost::math::ibeta(m.jp.beta + 1, m.jp.alpha + 1, c * c);
    }
    case MeasureId::Kind::BesselMu:
      return (1.0 - std::pow(x, 2 * m.nu + 2)) / (2 * m.nu + 2);
    default:
      return m.length - x;
  }
}

namespace {

double interval_measure(const MeasureId& m, double u, double v) {
  if (v <= u) return 0.0;
  // take the difference on the side where it does not cancel
  if (u + v < m.length) return cumulative_measure(m, v) - cumulative_measure(m, u);
  return cumulative_measure_right(m, u) - cumulative_measure_right(m, v);
}

double grading_map(double s, double k) {
  if (k == 1.0) return s;
  const double a = std::pow(s, k), b = std::pow(1.0 - s, k);
  return a / (a + b);
}

}  // namespace

GradedGrid make_grid(const MeasureId& m, int count, double grading, double left_exp, double right_exp) {
  if (count < 8) throw ParameterError("grid needs at least 8 points");
  if (!(grading >= 1.0)) throw ParameterError("grading exponent must be >= 1");
  if (!(left_exp > -1.0) || !(right_exp > -1.0))
    throw ParameterError("end-cell exponents must exceed -1");
  const int cells = (count + kCellNodes - 1) / kCellNodes;
  const double L = m.length;
  // A cell is an interval [a,b] of distances from one endpoint. Cells that are
  // long compared with their distance to the endpoint are split geometrically
  // (ratio <= 2) so plain Gauss stays accurate next to power singularities.
  struct Cell {
    bool right;
    double a, b;
  };
  std::vector<Cell> list;
  auto push_split = [&](bool right, double a, double b) {
    const int parts = (a > 0 && b / a > 2.0) ? static_cast<int>(std::ceil(std::log2(b / a))) : 1;
    const double q = std::pow(b / a, 1.0 / parts);
    double lo = a;
    for (int k = 0; k < parts; ++k) {
      const double hi = (k + 1 == parts) ? b : lo * q;
      list.push_back({right, lo, hi});
      lo = hi;
    }
  };
  for (int c = 0; c < cells; ++c) {
    const double s0 = static_cast<double>(c) / cells, s1 = static_cast<double>(c + 1) / cells;
    if (c == 0) {
      list.push_back({false, 0.0, L * grading_map(s1, grading)});
    } else if (c + 1 == cells) {
      list.push_back({true, 0.0, L * grading_map(1.0 - s0, grading)});
    } else if (s1 <= 0.5) {
      push_split(false, L * grading_map(s0, grading), L * grading_map(s1, grading));
    } else if (s0 >= 0.5) {
      push_split(true, L * grading_map(1.0 - s1, grading), L * grading_map(1.0 - s0, grading));
    } else {
      list.push_back({false, L * grading_map(s0, grading), L * grading_map(s1, grading)});
    }
  }
  std::sort(list.begin(), list.end(), [&](const Cell& u, const Cell& v) {
    const double xu = u.right ? L - u.b : u.a, xv = v.right ? L - v.b : v.a;
    return xu < xv;
  });
  GradedGrid g;
  g.grading = grading;
  g.length = L;
  g.points.reserve(list.size() * kCellNodes);
  g.weights.reserve(list.size() * kCellNodes);
  for (size_t ci = 0; ci < list.size(); ++ci) {
    const Cell& cell = list[ci];
    const bool at_end = cell.a == 0.0;
    const double e = at_end ? (cell.right ? right_exp : left_exp) : 0.0;
    // nodes in the distance coordinate; the endpoint sits at xi = -1
    const Rule& r = gauss_jacobi(kCellNodes, 0.0, e);
    const double h = cell.b - cell.a;
    const double scale = std::pow(0.5 * h, e + 1);
    const size_t base = g.points.size();
    for (int i = 0; i < kCellNodes; ++i) {
      const double dist = cell.a + 0.5 * h * (1 + r.x[i]);
      const double dl = cell.right ? L - dist : dist;
      const double dr = cell.right ? dist : L - dist;
      double w = scale * r.w[i] * density_lr(m, dl, dr);
      if (e != 0.0) w /= std::pow(dist, e);
      g.points.push_back(cell.right ? L - dist : dist);
      g.weights.push_back(w);
    }
    if (cell.right) {
      std::reverse(g.points.begin() + base, g.points.end());
      std::reverse(g.weights.begin() + base, g.weights.end());
    }
  }
  return g;
}

GradedGrid make_grid(const MeasureId& m, int count, double grading) {
  return make_grid(m, count, grading, m.left_exponent(), m.right_exponent());
}

GradedGrid make_setting_grid(const SettingId& s, int count, double grading) {
  const MeasureId m = measure_of(s);
  switch (s.variant) {
    case Variant::JacobiTrigFun:
    case Variant::JacobiScaled:
      return make_grid(m, count, grading, 2 * s.jp.alpha + 1, 2 * s.jp.beta + 1);
    case Variant::FBLebesgue:
      return make_grid(m, count, grading, 2 * s.bo.nu + 1, 0.0);
    default:
      return make_grid(m, count, grading);
  }
}

std::vector<double> graded_points(double length, int n, double grading) {
  std::vector<double> p(n);
  for (int i = 0; i < n; ++i) p[i] = length * grading_map((i + 0.5) / n, grading);
  return p;
}

double ball_envelope(JacobiParams p, double theta, double r) {
  if (!(r > 0)) throw DomainError("ball radius must be positive");
  return r * std::pow(r + theta, 2 * p.alpha + 1) * std::pow(r + kPi - theta, 2 * p.beta + 1);
}

double ball_measure(JacobiParams p, double theta, double r) {
  if (!(r > 0)) throw DomainError("ball radius must be positive");
  if (!(theta > 0 && theta < kPi)) throw DomainError("ball center must lie in (0, pi)");
  const MeasureId m = MeasureId::jacobi(p);
  const double a = theta - r, b = theta + r;
  if (a <= 0 && b >= kPi) return total_mass(m);
  if (a <= 0) return cumulative_measure(m, b);
  if (b >= kPi) return cumulative_measure_right(m, a);
  // interior ball: the density is smooth on [a,b]
  auto f = [&](double x) { return density_lr(m, x, kPi - x); };
  return integrate_gk(f, a, b, 1e-13).value;
}

double lp_norm_values(const std::vector<double>& v, double p, const GradedGrid& g) {
  if (v.size() != g.points.size()) throw ParameterError("value count does not match grid");
  std::string bad;
  for (size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i])) {
      if (bad.size() < 200) bad += " " + fmt(g.points[i]);
    }
  if (!bad.empty()) throw DomainError("non-finite function values at x =" + bad);
  if (std::isinf(p)) {
    double mx = 0;
    for (double x : v) mx = std::max(mx, std::fabs(x));
    return mx;
  }
  if (!(p >= 1.0)) throw ParameterError("Lp exponent must be >= 1");
  double s = 0;
  for (size_t i = 0; i < v.size(); ++i) s += g.weights[i] * std::pow(std::fabs(v[i]), p);
  return std::pow(s, 1.0 / p);
}

double lp_norm(const std::function<double(double)>& f, double p, const MeasureId&, const GradedGrid& g) {
  std::vector<double> v(g.points.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = f(g.points[i]);
  return lp_norm_values(v, p, g);
}

double weak_quasinorm_values(const std::vector<double>& v, double q, const MeasureId& m,
                             const GradedGrid& g) {
  if (!(q > 0)) throw ParameterError("weak exponent q must be positive");
  const size_t n = g.points.size();
  if (v.size() != n) throw ParameterError("value count does not match grid");
  if (n == 0) return 0.0;
  std::vector<double> gap(n + 1);
  gap[0] = cumulative_measure(m, g.points[0]);
  for (size_t i = 1; i < n; ++i) gap[i] = interval_measure(m, g.points[i - 1], g.points[i]);
  gap[n] = cumulative_measure_right(m, g.points[n - 1]);
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return std::fabs(v[a]) > std::fabs(v[b]); });
  auto sup_for = [&](bool left) {
    double acc = 0, best = 0;
    for (size_t k = 0; k < n; ++k) {
      const size_t i = order[k];
      double mass = left ? gap[i] : gap[i + 1];
      if (left && i + 1 == n) mass += gap[n];
      if (!left && i == 0) mass += gap[0];
      acc += mass;
      // ties: only evaluate after the last equal value has been added
      if (k + 1 < n && std::fabs(v[order[k + 1]]) == std::fabs(v[i])) continue;
      best = std::max(best, std::fabs(v[i]) * std::pow(acc, 1.0 / q));
    }
    return best;
  };
  return std::min(sup_for(true), sup_for(false));
}

double weak_quasinorm(const std::function<double(double)>& f, double q, const MeasureId& m,
                      const GradedGrid& g) {
  std::vector<double> v(g.points.size());
  for (size_t i = 0; i < v.size(); ++i) {
    v[i] = f(g.points[i]);
    if (!std::isfinite(v[i])) throw DomainError("non-finite function value at x = " + fmt(g.points[i]));
  }
  return weak_quasinorm_values(v, q, m, g);
}

void write_grid_csv(const GradedGrid& g, std::ostream& os) {
  os.precision(17);
  os << "# length=" << g.length << ",grading=" << g.grading << '\n';
  os << "point,weight\n";
  for (size_t i = 0; i < g.points.size(); ++i) os << g.points[i] << ',' << g.weights[i] << '\n';
}

GradedGrid read_grid_csv(std::istream& is) {
  GradedGrid g;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::sscanf(line.c_str(), "# length=%lf,grading=%lf", &g.length, &g.grading);
      continue;
    }
    if (!header) {
      header = true;
      continue;
    }
    const auto c = line.find(',');
    if (c == std::string::npos) throw ParameterError("malformed grid row: " + line);
    g.points.push_back(std::stod(line.substr(0, c)));
    g.weights.push_back(std::stod(line.substr(c + 1)));
  }
  return g;
}

}  // namespace spl
