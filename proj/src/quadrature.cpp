#include "spl/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "spl/common.hpp"

namespace spl {

namespace {

Rule build_gauss_jacobi(int n, double a, double b) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double c = 2.0 * k + a + b;
    J(k, k) = (k == 0) ? (b - a) / (a + b + 2) : (b * b - a * a) / (c * (c + 2));
    if (k + 1 < n) {
      const int m = k + 1;
      const double cm = 2.0 * m + a + b;
      double off;
      if (m == 1)
        off = 2.0 / (a + b + 2) * std::sqrt((1 + a) * (1 + b) / (a + b + 3));
      else
        off = 2.0 / cm * std::sqrt(m * (m + a) * (m + b) * (m + a + b) / ((cm - 1) * (cm + 1)));
      J(k, m) = J(m, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 = std::exp((a + b + 1) * std::log(2.0) + std::lgamma(a + 1) + std::lgamma(b + 1) -
                              std::lgamma(a + b + 2));
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    r.x[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    r.w[i] = mu0 * v * v;
  }
  return r;
}

}  // namespace

const Rule& gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw ParameterError("Gauss rule needs at least one node");
  if (!(a > -1.0 && b > -1.0)) throw ParameterError("Gauss-Jacobi exponents must exceed -1");
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, std::unique_ptr<Rule>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto& slot = cache[{n, a, b}];
  if (!slot) slot = std::make_unique<Rule>(build_gauss_jacobi(n, a, b));
  return *slot;
}

QuadResult integrate_gk(const std::function<double(double)>& f, double a, double b, double rel_tol,
                        unsigned max_depth) {
  QuadResult r;
  if (a == b) return r;
  double err = 0;
  r.value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, max_depth, rel_tol,
                                                                         &err);
  r.error = err;
  return r;
}

QuadResult integrate_ts(const std::function<double(double, double)>& f, double a, double b,
                        double rel_tol) {
  QuadResult r;
  if (a == b) return r;
  static thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
  double err = 0, l1 = 0;
  r.value = ts.integrate(f, a, b, rel_tol, &err, &l1);
  r.error = err;
  return r;
}

}  // namespace spl
