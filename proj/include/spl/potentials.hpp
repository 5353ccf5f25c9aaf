#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "spl/common.hpp"
#include "spl/measures.hpp"

namespace spl {

enum class PotentialVariant { Riesz, Bessel };

struct PotentialSpec {
  SettingId setting;
  double sigma = 0.5;
  PotentialVariant variant = PotentialVariant::Riesz;
  void validate() const;  // throws ParameterError
};

struct PotentialOptions {
  // heat time separating the eigenseries part from the small-time model part
  double u_split = 1e-4;
};

KernelValue potential_kernel(const PotentialSpec& spec, double x, double y, double tol,
                             const PotentialOptions& opt = {});

struct PotentialValues {
  std::vector<double> value;
  std::vector<double> error;
};

// (I f)(x) = int K(x,y) f(y) dm(y) at every grid point
PotentialValues apply_potential(const PotentialSpec& spec, const std::function<double(double)>& f,
                                const GradedGrid& g, double tol = 1e-10, const PotentialOptions& opt = {});
PotentialValues apply_potential(const PotentialSpec& spec, const std::function<double(double)>& f,
                                const std::vector<double>& points, double tol = 1e-10,
                                const PotentialOptions& opt = {});

// f takes the distances (dl, dr) of the point to the two endpoints
PotentialValues apply_potential_lr(const PotentialSpec& spec, const std::function<double(double, double)>& f,
                                   const std::vector<double>& points, double tol = 1e-10,
                                   const PotentialOptions& opt = {});

// sum_n lambda_n^{-sigma} a_n phi_n(x), coefficients indexed from the setting's index origin
double spectral_potential_oracle(const PotentialSpec& spec, const std::vector<double>& coefficients, double x);

// independent route for the Riesz kernel: Poisson series plus subordinated small times
KernelValue potential_kernel_poisson_path(const PotentialSpec& spec, double x, double y, double tol);

// columns x, y, value, error; diagonal entries are skipped when the kernel is singular there
void write_potential_matrix_csv(std::ostream& os, const PotentialSpec& spec, const std::vector<double>& points,
                                double tol, const PotentialOptions& opt = {});

namespace detail {
// kernel with the separation d = y - x supplied separately (exact near the diagonal)
KernelValue potential_kernel_sep(const PotentialSpec& spec, double x, double y, double d, double tol,
                                 const PotentialOptions& opt);
}  // namespace detail

}  // namespace spl
