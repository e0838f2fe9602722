#pragma once

#include <functional>
#include <vector>

#include "parastab/spectral.hpp"
#include "parastab/tridiag.hpp"

namespace parastab {

using CoefFn = std::function<double(double t, double x)>;

struct Grid1D {
  int N = 0;
  double L = 1.0;
  double h = 0.0;
  std::vector<double> nodes;

  Grid1D() = default;
  Grid1D(int N, double L);
};

// Hat-function P1 operators. Under Dirichlet the boundary nodes are eliminated and
// every vector lives on the interior nodes 1..N-1.
struct FemOperators {
  Grid1D grid;
  Boundary bc = Boundary::Dirichlet;
  Tridiag mass;
  Tridiag stiffness;
  int first = 0;  // grid index of the first active node
  int ndof = 0;

  double x(int dof) const { return grid.nodes[first + dof]; }
  Vec restrict_full(const Vec& full) const;
  Vec extend(const Vec& active) const;
  Tridiag restrict_full(const Tridiag& full) const;
};

FemOperators assemble(const Grid1D& grid, Boundary bc);

double h_norm(const Vec& y, const FemOperators& ops);
double v_norm(const Vec& y, const FemOperators& ops, double nu);

// Weak forms of (a-1)y and b*y' with one-point quadrature per element, on active dofs.
Tridiag assemble_reaction(const FemOperators& ops, const CoefFn& a, double t);
Tridiag assemble_advection(const FemOperators& ops, const CoefFn& b, double t);

// Nodal interpolation on every grid node (N+1 values).
Vec sample(const std::function<double(double)>& f, const Grid1D& grid);
// Nodal interpolation restricted to active dofs.
Vec sample(const std::function<double(double)>& f, const FemOperators& ops);

// Exact integrals of the mode against each hat function, on active dofs.
Vec mode_load(const Mode& e, const FemOperators& ops);

}  // namespace parastab
