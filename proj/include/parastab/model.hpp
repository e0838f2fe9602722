#pragma once

#include <functional>
#include <vector>

#include "parastab/fem.hpp"
#include "parastab/spectral.hpp"

namespace parastab {

struct ReactionTerm {
  CoefFn amp;  // \hat a_j
  double r;
};

struct ConvectionTerm {
  CoefFn amp;  // \hat b_j
  double s;
};

struct SemilinearModel {
  IntervalDomain domain;
  CoefFn a;  // reaction coefficient; A_rc y = (a-1)y + b y'
  CoefFn b;
  std::vector<ReactionTerm> reaction;
  std::vector<ConvectionTerm> convection;
  double C_rc = 0.0;
  double C_N = 0.0;

  bool linear() const { return reaction.empty() && convection.empty(); }
  void validate(int dims = 1) const;
};

struct ExponentTuple {
  double z1, z2, d1, d2;
};

struct ExponentRecord {
  std::vector<ExponentTuple> tuples;
  double max_z2d2 = 0;     // ||zeta2 + delta2||
  double max_ratio = 0;    // ||(zeta1 + delta1)/(1 - zeta2 - delta2)||
  double max_z2_over = 0;  // ||zeta2/(1 - delta2)||
  double frak_p = 0;
};

// Fills the derived maxima; throws InvalidArgument if a tuple violates the
// nonlinearity assumption (zeta2+delta2 < 1, delta1+delta2 >= 1).
ExponentRecord make_exponent_record(std::vector<ExponentTuple> tuples);
ExponentRecord exponent_record(const SemilinearModel& model, int dims);

// Nodal values (active dofs) of sum_j ahat_j|y|^{r_j-1}y + (bhat_j y')|y|^{s_j-1}y.
// y' at nodes averages the adjacent element slopes. Overflow yields non-finite entries.
Vec eval_nonlinearity(const SemilinearModel& model, double t, const Vec& y, const FemOperators& ops);

struct CoefficientBounds {
  double max_abs_a;
  double max_abs_a_minus_1;
  double max_abs_b;
  double C_rc;  // max|a-1| + max|b|/sqrt(nu)
};

CoefficientBounds coefficient_bounds(const SemilinearModel& model, double T, int nt = 201, int nx = 201);

struct BenchmarkSetup {
  SemilinearModel model;
  std::function<double(double)> y0;
};

// nu=0.1, L=1, Dirichlet, p=13/4, the oscillating a(t,x), b(t,x), y0 = c_ic sin(2 pi x).
BenchmarkSetup benchmark_model(double c_N, double c_ic, int wave = 2);

}  // namespace parastab

namespace parastab {

// K_h(t) = nu S + M + R(t) + B(t): weak form of A + A_rc(t) on active dofs.
Tridiag linear_operator(const SemilinearModel& model, const FemOperators& ops, double t);

}  // namespace parastab
