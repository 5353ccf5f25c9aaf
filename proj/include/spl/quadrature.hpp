#pragma once

#include <functional>
#include <vector>

namespace spl {

struct Rule {
  std::vector<double> x, w;
};

// Gauss rule for (1-x)^a (1+x)^b on [-1,1] (Golub-Welsch). Cached, thread safe.
const Rule& gauss_jacobi(int n, double a, double b);
inline const Rule& gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

// adaptive Gauss-Kronrod (21 point) on a finite interval
QuadResult integrate_gk(const std::function<double(double)>& f, double a, double b, double rel_tol,
                        unsigned max_depth = 18);

// tanh-sinh on [a,b]; f receives (x, d) where d is the signed distance to the
// nearer endpoint (a - x near a, b - x near b), accurate even where x rounds
// onto the endpoint.
QuadResult integrate_ts(const std::function<double(double, double)>& f, double a, double b,
                        double rel_tol);

}  // namespace spl
