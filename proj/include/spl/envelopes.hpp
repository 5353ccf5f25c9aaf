#pragma once

#include <string>
#include <vector>

#include "spl/common.hpp"
#include "spl/potentials.hpp"

namespace spl {

// activation of the singular indicator terms (sigma = alpha+1 and friends)
constexpr double kIndicatorTol = 1e-12;
// the CLI warns when sigma is this close to a threshold without hitting it
constexpr double kNearThresholdTol = 1e-6;

// J(T, S, w) = int_T^S t^gamma / (t^2 + w^2) dt
struct JGammaArgs {
  double gamma = 0.0;
  double T = 0.0;
  double S = 1.0;
  double w = 1.0;
  double M = 1.0;
  void validate() const;  // throws DomainError / ParameterError
};

double j_gamma_closed(const JGammaArgs& a);
double j_gamma_quad(const JGammaArgs& a);

// |A - B| (A v B)^{xi-1} for xi > 0, |A - B| (A ^ B)^{xi+1} / (AB) for xi < 0
double power_diff_envelope(double xi, double A, double B);

// Two-branch Poisson envelope, short-time form for t <= T.
double poisson_envelope(const SettingId& s, double t, double x, double y, double T);

// Potential kernel envelope; +inf on the diagonal when sigma <= 1/2.
double potential_envelope(const SettingId& s, double sigma, double x, double y);

enum class KernelFamily { JacobiPol, JacobiFun };
// components 1..6 of the potential kernel decomposition (pol: curly K, fun: blackboard K)
double kernel_component(KernelFamily family, int i, JacobiParams p, double sigma, double theta, double phi);

// |theta - phi|^xi / mu(B(theta, |theta - phi|))
double u_xi_kernel(JacobiParams p, double xi, double theta, double phi);

// thresholds of the singular indicator terms for this setting
std::vector<double> activation_thresholds(const SettingId& s);
// true when sigma is within kNearThresholdTol of a threshold but not exactly on it
bool near_activation(const SettingId& s, double sigma);

struct EnvelopeBand {
  double lower_ratio = 0.0;
  double upper_ratio = 0.0;
  std::size_t sample_count = 0;
  std::vector<double> argmin;  // (t, x, y) or (x, y)
  std::vector<double> argmax;
  std::size_t bad_count = 0;  // non-finite or non-positive ratios
  void add(double ratio, const std::vector<double>& where);
  double spread() const { return upper_ratio / lower_ratio; }
  bool ok() const;
};

struct PoissonBandSpec {
  SettingId setting;
  std::vector<double> ts;
  int grid = 30;
  double grading = 3.0;
  double T = 2.0;
  double tol = 1e-30;
};
EnvelopeBand poisson_band(const PoissonBandSpec& spec);

struct PotentialBandSpec {
  PotentialSpec potential;
  int grid = 30;
  double grading = 3.0;
  double rel_tol = 1e-6;  // samples whose error bound exceeds rel_tol * value count as bad
};
EnvelopeBand potential_band(const PotentialBandSpec& spec);

// Smallest t on a log ladder in [t_lo, t_hi] from which the first eigenmode
// reproduces the heat kernel to within rel at all sampled points.
double first_term_threshold(const SettingId& s, double rel, int grid = 12, double t_lo = 0.05, double t_hi = 50);

std::vector<double> log_space(double a, double b, int n);

}  // namespace spl
