#pragma once

#include <vector>

#include "parastab/fem.hpp"
#include "parastab/spectral.hpp"

namespace parastab {

struct ActuatorFamily {
  int M = 0;
  double r = 0.0;
  double L = 1.0;
  std::vector<double> centers;
  double half_width = 0.0;
  Mat loads;  // ndof x M, column j holds the integrals of 1_{omega_j} against each hat
  Mat Phi;    // ndof x M, mass-inverted loads (H-representatives of the actuators)
  bool indicator = true;

  double support_begin(int j) const { return centers[j] - half_width; }
  double support_end(int j) const { return centers[j] + half_width; }
};

// M indicator actuators of width rL/M centred at (2j-1)L/(2M).
ActuatorFamily build_actuators(int M, double r, const FemOperators& ops);

// Actuators given directly by load vectors (used to put eigenfunctions or synthetic
// shapes in place of the indicators).
ActuatorFamily custom_actuators(const Mat& loads, const FemOperators& ops);
ActuatorFamily eigen_actuators(const SpectralBasis& basis, const FemOperators& ops);

// Theta_ij = (e_i, 1_{omega_j}) in closed form.
Mat inner_products(const ActuatorFamily& family, const SpectralBasis& basis);

// Exact integral of a hat function k (grid index) over [a,b].
double hat_integral(const Grid1D& g, int k, double a, double b);

Mat mass_solve(const FemOperators& ops, const Mat& rhs);

}  // namespace parastab
