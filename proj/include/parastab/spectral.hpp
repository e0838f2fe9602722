#pragma once

#include <array>
#include <vector>

namespace parastab {

enum class Boundary { Dirichlet, Neumann };

const char* to_string(Boundary bc);
Boundary boundary_from_string(const char* s);

struct IntervalDomain {
  double L = 1.0;
  Boundary bc = Boundary::Dirichlet;
  double nu = 1.0;

  void validate() const;
};

// e(x) = amp * cos(omega*x - phase)
struct Mode {
  double amp;
  double omega;
  double phase;

  double operator()(double x) const;
};

double eigenvalue(const IntervalDomain& dom, int i);
Mode eigenmode(const IntervalDomain& dom, int i);

struct SpectralBasis {
  IntervalDomain domain;
  std::vector<int> indices;
  std::vector<double> alphas;
  std::vector<Mode> modes;

  std::size_t size() const { return indices.size(); }
  double eval(std::size_t n, double x) const { return modes[n](x); }
};

SpectralBasis eigenpairs(const IntervalDomain& dom, const std::vector<int>& indices);
SpectralBasis first_modes(const IntervalDomain& dom, int M);

struct EigRatioReport {
  double alpha_M;
  double alpha_Mplus;
  double ratio;
  double ratio_bound;
  bool within_bound;
};

EigRatioReport eig_extremes(const SpectralBasis& basis, double ratio_bound);

struct TensorIndexReport {
  int dims;
  std::vector<std::array<int, 3>> indices;  // the box {1..M}^d, unused axes set to 1
  double alpha_M;
  double alpha_Mplus;
  std::array<int, 3> argmin_plus;
};

TensorIndexReport tensor_index_set(int per_axis_M, int dims, const std::vector<double>& lengths,
                                   Boundary bc, double nu, long long budget = 1000000);

// Exact integral of amp*cos(omega*x - phase) over [a,b].
double integrate_mode(const Mode& e, double a, double b);
// Exact integral of e(x)*e2(x) over [0,L]; used by the orthonormality checks.
double mode_inner_product(const Mode& e1, const Mode& e2, double L);

}  // namespace parastab
