#pragma once

#include <Eigen/LU>

#include "parastab/actuators.hpp"
#include "parastab/fem.hpp"
#include "parastab/spectral.hpp"

namespace parastab {

// Discrete oblique projection onto span(Phi) along the M-orthogonal complement of
// span(E). g holds the exact integrals (e_i, hat_k); E = M^{-1} g.
class ObliqueProjector {
 public:
  ObliqueProjector(const SpectralBasis& basis, const ActuatorFamily& family, const FemOperators& ops,
                   double max_condition = 1e12);

  int m() const { return static_cast<int>(g_.cols()); }
  const Mat& theta() const { return theta_h_; }
  const Mat& theta_continuum() const { return theta_c_; }
  // max(1, s_max)/s_min of Theta with columns scaled to unit-norm actuators.
  double condition_number() const { return cond_; }
  const Mat& g() const { return g_; }
  const Mat& E() const { return E_; }
  const Mat& gram() const { return G_; }
  const Mat& Phi() const { return Phi_; }
  const SpectralBasis& basis() const { return basis_; }

  Vec apply_PU(const Vec& h) const;
  Vec apply_PEperp_U(const Vec& h) const;
  Vec apply_PE(const Vec& h) const;
  // Coefficients c with P_E y = E c.
  Vec eigen_coeffs(const Vec& y) const;
  Vec from_eigen_coeffs(const Vec& c) const { return E_ * c; }
  // u with P_U h = Phi u.
  Vec actuator_coeffs(const Vec& h) const;
  Vec solve_theta(const Vec& rhs) const { return theta_lu_.solve(rhs); }
  Vec solve_gram(const Vec& rhs) const { return G_lu_.solve(rhs); }

 private:
  SpectralBasis basis_;
  Mat g_, E_, G_, Phi_, theta_h_, theta_c_;
  Eigen::PartialPivLU<Mat> theta_lu_, G_lu_;
  double cond_ = 0.0;
};

struct PowerIterationOptions {
  double tol = 1e-8;
  int max_iter = 10000;
  unsigned seed = 12345;
};

// Largest singular value of P_U in the mass-weighted metric. An empty family gives 0.
double operator_norm(const ObliqueProjector* proj, const FemOperators& ops,
                     const PowerIterationOptions& opt = {});
double operator_norm(const ObliqueProjector& proj, const FemOperators& ops,
                     const PowerIterationOptions& opt = {});

// Same quantity from the reduced m x m symmetric eigenproblem (cross-check).
double operator_norm_reduced(const ObliqueProjector& proj, const FemOperators& ops);

}  // namespace parastab
