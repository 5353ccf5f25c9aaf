#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "spl/common.hpp"
#include "spl/specfun.hpp"

namespace spl {

struct KernelOptions {
  double t_min_poisson = 1e-3;
  double t_min_heat = 1e-4;
  int n_max = 20000;
  double T_sub = 4.0;
  // below this heat time the small-time model replaces the eigenseries
  double u_split = 1e-4;
};

KernelValue poisson_kernel(const SettingId& s, double t, double x, double y, double tol,
                           const KernelOptions& opt = {});
KernelValue heat_kernel(const SettingId& s, double t, double x, double y, double tol,
                        const KernelOptions& opt = {});
KernelValue subordinated_poisson(const SettingId& s, double t, double x, double y, double tol,
                                 const KernelOptions& opt = {});

// Eigenfunction values tabulated at a fixed set of coordinates, for sweeps over
// many (t, x_i, x_j). Read-only after construction.
class KernelTable {
 public:
  KernelTable(const SettingId& s, const std::vector<double>& coords, int terms);
  const std::vector<double>& coords() const { return coords_; }
  int terms() const { return terms_; }
  KernelValue poisson(double t, int i, int j, double tol, const KernelOptions& opt = {}) const;
  KernelValue heat(double t, int i, int j, double tol, const KernelOptions& opt = {}) const;

 private:
  SettingId s_;
  std::shared_ptr<const Eigensystem> es_;
  std::vector<double> coords_;
  int terms_;
  std::vector<double> vals_;  // coords x terms
};

// Growth exponent used by the tail bound: |phi_n(x) phi_n(y)| <~ n^gamma.
double tail_growth_exponent(const SettingId& s);

void write_kernel_slice_csv(std::ostream& os, const SettingId& s, bool heat, const std::vector<double>& ts,
                            const std::vector<double>& xs, const std::vector<double>& ys, double tol,
                            const KernelOptions& opt = {});

namespace detail {

enum class SeriesKind { Poisson, Heat };

// Sum of w(s_k) a_k with a_k = phi_k(x) phi_k(y) given as products, with the
// certified tail rule. `avail` is how many products are supplied.
struct SeriesResult {
  KernelValue kv;
  int used = 0;
  bool converged = false;
};
SeriesResult sum_series(const Eigensystem& es, SeriesKind kind, double t, const double* vx,
                        const double* vy, int avail, double tol, double gamma);

// number of terms needed (rough) so that the weight falls below tol
int terms_estimate(const SettingId& s, SeriesKind kind, double t, double tol);

}  // namespace detail

}  // namespace spl
