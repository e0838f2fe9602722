#include "parastab/fem.hpp"

#include <cmath>

#include "parastab/errors.hpp"

namespace parastab {

Grid1D::Grid1D(int n, double len) : N(n), L(len) {
  if (n < 4) throw InvalidArgument("grid needs at least 4 cells");
  if (!(len > 0)) throw InvalidArgument("grid length must be positive");
  h = L / N;
  nodes.resize(N + 1);
  for (int k = 0; k <= N; ++k) nodes[k] = k * h;
  nodes[N] = L;
}

Vec FemOperators::restrict_full(const Vec& full) const {
  if (full.size() != grid.N + 1) throw InvalidArgument("restrict: expected full nodal vector");
  return full.segment(first, ndof);
}

Vec FemOperators::extend(const Vec& active) const {
  if (active.size() != ndof) throw InvalidArgument("extend: dimension mismatch");
  Vec full = Vec::Zero(grid.N + 1);
  full.segment(first, ndof) = active;
  return full;
}

Tridiag FemOperators::restrict_full(const Tridiag& f) const {
  if (first == 0) return f;
  Tridiag t;
  t.diag = f.diag.segment(first, ndof);
  t.lower = f.lower.segment(first, ndof - 1);
  t.upper = f.upper.segment(first, ndof - 1);
  return t;
}

namespace {

// Adds the 2x2 element matrix [[p, q], [r, s]] of every element, weighted per element.
template <class Local>
Tridiag assemble_full(const Grid1D& g, Local local) {
  Tridiag a(g.N + 1);
  for (int e = 0; e < g.N; ++e) {
    double m[2][2];
    local(e, m);
    a.diag(e) += m[0][0];
    a.upper(e) += m[0][1];
    a.lower(e) += m[1][0];
    a.diag(e + 1) += m[1][1];
  }
  return a;
}

}  // namespace

FemOperators assemble(const Grid1D& grid, Boundary bc) {
  FemOperators ops;
  ops.grid = grid;
  ops.bc = bc;
  const double h = grid.h;
  Tridiag mass = assemble_full(grid, [h](int, double m[2][2]) {
    m[0][0] = m[1][1] = h / 3.0;
    m[0][1] = m[1][0] = h / 6.0;
  });
  Tridiag stiff = assemble_full(grid, [h](int, double m[2][2]) {
    m[0][0] = m[1][1] = 1.0 / h;
    m[0][1] = m[1][0] = -1.0 / h;
  });
  if (bc == Boundary::Dirichlet) {
    ops.first = 1;
    ops.ndof = grid.N - 1;
  } else {
    ops.first = 0;
    ops.ndof = grid.N + 1;
  }
  ops.mass = ops.restrict_full(mass);
  ops.stiffness = ops.restrict_full(stiff);
  return ops;
}

double h_norm(const Vec& y, const FemOperators& ops) {
  if (y.size() != ops.ndof) throw InvalidArgument("h_norm: dimension mismatch");
  return std::sqrt(std::max(0.0, y.dot(ops.mass.apply(y))));
}

double v_norm(const Vec& y, const FemOperators& ops, double nu) {
  if (y.size() != ops.ndof) throw InvalidArgument("v_norm: dimension mismatch");
  return std::sqrt(std::max(0.0, y.dot(nu * ops.stiffness.apply(y) + ops.mass.apply(y))));
}

Tridiag assemble_reaction(const FemOperators& ops, const CoefFn& a, double t) {
  const Grid1D& g = ops.grid;
  const double h = g.h;
  Tridiag full = assemble_full(g, [&](int e, double m[2][2]) {
    const double w = a(t, g.nodes[e] + 0.5 * h) - 1.0;
    m[0][0] = m[1][1] = w * h / 3.0;
    m[0][1] = m[1][0] = w * h / 6.0;
  });
  return ops.restrict_full(full);
}

Tridiag assemble_advection(const FemOperators& ops, const CoefFn& b, double t) {
  const Grid1D& g = ops.grid;
  Tridiag full = assemble_full(g, [&](int e, double m[2][2]) {
    const double w = 0.5 * b(t, g.nodes[e] + 0.5 * g.h);
    m[0][0] = m[1][0] = -w;
    m[0][1] = m[1][1] = w;
  });
  return ops.restrict_full(full);
}

Vec sample(const std::function<double(double)>& f, const Grid1D& grid) {
  Vec v(grid.N + 1);
  for (int k = 0; k <= grid.N; ++k) {
    v(k) = f(grid.nodes[k]);
    if (!std::isfinite(v(k))) throw InvalidArgument("sample: non-finite value");
  }
  return v;
}

Vec sample(const std::function<double(double)>& f, const FemOperators& ops) {
  return ops.restrict_full(sample(f, ops.grid));
}

Vec mode_load(const Mode& e, const FemOperators& ops) {
  const Grid1D& g = ops.grid;
  const double s = 0.5 * g.h;
  Vec full = Vec::Zero(g.N + 1);
  for (int k = 0; k < g.N; ++k) {
    const double m = g.nodes[k] + s;
    const double theta = e.omega * m - e.phase;
    const double z = e.omega * s;
    // (sin z - z cos z)/z^2
    double f;
    if (std::abs(z) < 1e-3)
      f = z / 3.0 - z * z * z / 30.0;
    else
      f = (std::sin(z) - z * std::cos(z)) / (z * z);
    const double sz = std::abs(z) < 1e-4 ? 1.0 - z * z / 6.0 : std::sin(z) / z;
    const double i0 = e.amp * 2.0 * s * std::cos(theta) * sz;
    const double i1 = -e.amp * std::sin(theta) * 2.0 * s * s * f;
    full(k) += 0.5 * i0 - i1 / g.h;
    full(k + 1) += 0.5 * i0 + i1 / g.h;
  }
  return ops.restrict_full(full);
}

}  // namespace parastab
