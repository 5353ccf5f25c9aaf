#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "spl/common.hpp"

namespace spl {

struct MeasureId {
  enum class Kind { JacobiMu, BesselMu, Lebesgue };
  Kind kind = Kind::Lebesgue;
  JacobiParams jp{};
  double nu = 0.0;
  double length = 1.0;  // interval is (0, length)

  static MeasureId jacobi(JacobiParams p) { return {Kind::JacobiMu, p, 0.0, kPi}; }
  static MeasureId bessel(double nu) { return {Kind::BesselMu, {}, nu, 1.0}; }
  static MeasureId lebesgue(double length) { return {Kind::Lebesgue, {}, 0.0, length}; }
  // power exponents of the density at the two endpoints
  double left_exponent() const;
  double right_exponent() const;
};

MeasureId measure_of(const SettingId& s);

double density(const MeasureId& m, double x);
// density evaluated from the distances to both endpoints (exact near either end)
double density_lr(const MeasureId& m, double dl, double dr);
double total_mass(const MeasureId& m);

struct GradedGrid {
  std::vector<double> points;
  std::vector<double> weights;
  double grading = 3.0;
  double length = 1.0;
};

// Composite Gauss grid graded toward both ends: x = L g(s), g(s) = s^k / (s^k + (1-s)^k).
// Cells of 8 nodes; the two end cells use Gauss-Jacobi rules for the endpoint
// power of the density so singular densities integrate to full accuracy.
GradedGrid make_grid(const MeasureId& m, int count, double grading = 3.0);
// Same, with explicit end-cell exponents for integrands more singular than the density.
GradedGrid make_grid(const MeasureId& m, int count, double grading, double left_exp, double right_exp);
// Quadrature grid for products of two eigenfunctions of s against its measure.
GradedGrid make_setting_grid(const SettingId& s, int count, double grading = 3.0);

// Plain graded evaluation points (no weights): L g((i+1/2)/n).
std::vector<double> graded_points(double length, int n, double grading = 3.0);

double ball_measure(JacobiParams p, double theta, double r);
double ball_envelope(JacobiParams p, double theta, double r);

double lp_norm(const std::function<double(double)>& f, double p, const MeasureId& m, const GradedGrid& g);
double lp_norm_values(const std::vector<double>& values, double p, const GradedGrid& g);
double weak_quasinorm(const std::function<double(double)>& f, double q, const MeasureId& m,
                      const GradedGrid& g);
// Level sets are measured with the exact measure of the gaps between grid
// points; each gap is charged once to its left node and once to its right node
// and the smaller of the two suprema is reported (sharp for monotone f).
double weak_quasinorm_values(const std::vector<double>& values, double q, const MeasureId& m,
                             const GradedGrid& g);
// mu((0, x)) and mu((x, L))
double cumulative_measure(const MeasureId& m, double x);
double cumulative_measure_right(const MeasureId& m, double x);

void write_grid_csv(const GradedGrid& g, std::ostream& os);
GradedGrid read_grid_csv(std::istream& is);

}  // namespace spl
