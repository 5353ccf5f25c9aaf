#pragma once

// Small-time model of the heat kernels: Gaussian times Hankel-type endpoint
// factors. Internal to the library.

#include "spl/common.hpp"

namespace spl::detail {

struct HeatGeometry {
  double L = 1.0;      // interval length in the model coordinates
  double a = 0.0;      // endpoint order at 0
  double b = 0.0;      // endpoint order at L
  bool weighted = false;  // kernel is taken against a power-type measure
  JacobiParams jp{};
  double nu = 0.0;
  bool jacobi = true;
};

HeatGeometry heat_geometry(const SettingId& s);

// sqrt(2 pi z) e^{-z} I_c(z)
double hankel_factor(double c, double z);

// a point given by its distances to both ends of the model interval
struct Pt {
  double l, r;
};

// model heat kernel at time u for points x, y with signed separation d = y - x
// (d is passed separately so that nearly coincident points keep full accuracy)
double heat_model(const HeatGeometry& g, double u, Pt x, Pt y, double d);
inline double heat_model(const HeatGeometry& g, double u, double x, double y, double d) {
  return heat_model(g, u, Pt{x, g.L - x}, Pt{y, g.L - y}, d);
}

// 1 / sqrt(rho(x) rho(y)) for the weighted settings, 1 otherwise
double model_weight(const HeatGeometry& g, Pt x, Pt y);
inline double model_weight(const HeatGeometry& g, double x, double y) {
  return model_weight(g, Pt{x, g.L - x}, Pt{y, g.L - y});
}

}  // namespace spl::detail
