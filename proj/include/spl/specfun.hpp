#pragma once

#include <memory>
#include <vector>

#include "spl/common.hpp"

namespace spl {

// P_n^{a,b}(u), Szego normalization, forward recurrence.
double jacobi_poly(int n, JacobiParams p, double u);
// k-th derivative in u (k = 0, 1, 2).
double jacobi_poly_deriv(int n, JacobiParams p, double u, int k);

// Total mass of d mu_{a,b} on (0, pi).
double jacobi_mass(JacobiParams p);

double norm_const(const SettingId& s, int n);
double eigfun(const SettingId& s, int n, double x);
// eigfun from the distances to both endpoints; accurate where x rounds onto an endpoint
double eigfun_lr(const SettingId& s, int n, double dl, double dr);

struct Derivs {
  double f = 0, d1 = 0, d2 = 0;
};
// eigfun together with its first two x-derivatives, from derivative identities.
Derivs eigfun_derivs(const SettingId& s, int n, double x);
// Apply the setting's differential operator to a function given by its derivatives at x.
double apply_operator(const SettingId& s, double x, const Derivs& d);

double bessel_j(BesselOrder order, double x);
inline double bessel_j(double nu, double x) { return bessel_j(BesselOrder{nu}, x); }
double bessel_zero(BesselOrder order, int n);
// s_1 .. s_count in one sweep
std::vector<double> bessel_zeros(BesselOrder order, int count);

double eigenvalue(const SettingId& s, int n);
double sqrt_eigenvalue(const SettingId& s, int n);

// e^{-z} I_a(z), z >= 0, a > -1
double bessel_i_scaled(double a, double z);

namespace detail {
double bessel_j_series(double nu, double x);
// returns NaN when the asymptotic series cannot reach full double accuracy
double bessel_j_hankel(double nu, double x);
double bessel_crossover(double nu);
}  // namespace detail

// Precomputed eigenvalues plus recurrence data for one setting. Immutable after
// construction, so one instance can be shared across threads.
class Eigensystem {
 public:
  Eigensystem(const SettingId& s, int capacity);

  const SettingId& setting() const { return s_; }
  int capacity() const { return static_cast<int>(sq_.size()); }
  // k counts from the index origin: mode n = origin + k
  double sqrt_eig(int k) const { return sq_[k]; }
  double eig(int k) const { return sq_[k] * sq_[k]; }
  // FB only: normalizing constant of mode k
  double fb_norm(int k) const { return cn_[k]; }

  // eigfun_{origin+k}(x) for k < count
  void values(double x, int count, double* out) const;
  // same, from the distances of x to the two endpoints (full accuracy near either end)
  void values_lr(double dl, double dr, int count, double* out) const;
  std::vector<double> values(double x, int count) const;

 private:
  SettingId s_;
  std::vector<double> sq_;
  // Jacobi: orthonormal recurrence u p_n = a_{n+1} p_{n+1} + b_n p_n + a_n p_{n-1}
  std::vector<double> ra_, rb_;
  double p0_ = 0;
  // FB: zeros, normalizing constants, J_{nu+1} at the zeros
  std::vector<double> zeros_, cn_, jn1_;
};

// Shared instance with at least `capacity` modes; grows on demand.
std::shared_ptr<const Eigensystem> eigensystem(const SettingId& s, int capacity);

}  // namespace spl
