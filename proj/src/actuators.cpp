#include "parastab/actuators.hpp"

#include <algorithm>
#include <cmath>

#include "parastab/errors.hpp"

namespace parastab {

double hat_integral(const Grid1D& g, int k, double a, double b) {
  double total = 0.0;
  // rising part on [x_{k-1}, x_k], falling part on [x_k, x_{k+1}]
  if (k > 0) {
    const double lo = std::max(a, g.nodes[k - 1]), hi = std::min(b, g.nodes[k]);
    if (hi > lo) {
      const double u0 = (lo - g.nodes[k - 1]) / g.h, u1 = (hi - g.nodes[k - 1]) / g.h;
      total += 0.5 * g.h * (u1 * u1 - u0 * u0);
    }
  }
  if (k < g.N) {
    const double lo = std::max(a, g.nodes[k]), hi = std::min(b, g.nodes[k + 1]);
    if (hi > lo) {
      const double u0 = (g.nodes[k + 1] - hi) / g.h, u1 = (g.nodes[k + 1] - lo) / g.h;
      total += 0.5 * g.h * (u1 * u1 - u0 * u0);
    }
  }
  return total;
}

Mat mass_solve(const FemOperators& ops, const Mat& rhs) {
  TridiagSolver s(ops.mass);
  Mat out = rhs;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    Vec c = out.col(j);
    s.solve_in_place(c);
    out.col(j) = c;
  }
  return out;
}

ActuatorFamily build_actuators(int M, double r, const FemOperators& ops) {
  if (M < 1) throw InvalidArgument("actuator count must be positive");
  if (!(r > 0.0 && r < 1.0)) throw InvalidArgument("actuator coverage r must lie in (0,1)");
  const Grid1D& g = ops.grid;
  ActuatorFamily f;
  f.M = M;
  f.r = r;
  f.L = g.L;
  f.half_width = r * g.L / (2.0 * M);
  f.loads = Mat::Zero(ops.ndof, M);
  for (int j = 0; j < M; ++j) {
    const double c = (2.0 * (j + 1) - 1.0) * g.L / (2.0 * M);
    f.centers.push_back(c);
    const double a = c - f.half_width, b = c + f.half_width;
    Vec full = Vec::Zero(g.N + 1);
    const int k0 = std::max(0, static_cast<int>(std::floor(a / g.h)) - 1);
    const int k1 = std::min(g.N, static_cast<int>(std::ceil(b / g.h)) + 1);
    for (int k = k0; k <= k1; ++k) full(k) = hat_integral(g, k, a, b);
    f.loads.col(j) = ops.restrict_full(full);
  }
  f.Phi = mass_solve(ops, f.loads);
  return f;
}

ActuatorFamily custom_actuators(const Mat& loads, const FemOperators& ops) {
  if (loads.rows() != ops.ndof) throw InvalidArgument("custom actuators: row count must equal ndof");
  ActuatorFamily f;
  f.M = static_cast<int>(loads.cols());
  f.L = ops.grid.L;
  f.loads = loads;
  f.Phi = mass_solve(ops, loads);
  f.indicator = false;
  return f;
}

ActuatorFamily eigen_actuators(const SpectralBasis& basis, const FemOperators& ops) {
  Mat loads(ops.ndof, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) loads.col(i) = mode_load(basis.modes[i], ops);
  return custom_actuators(loads, ops);
}

Mat inner_products(const ActuatorFamily& family, const SpectralBasis& basis) {
  if (static_cast<int>(basis.size()) != family.M)
    throw InvalidArgument("inner_products: basis and family must have equal cardinality");
  if (!family.indicator) throw InvalidArgument("inner_products: closed form needs indicator actuators");
  Mat theta(family.M, family.M);
  for (int i = 0; i < family.M; ++i)
    for (int j = 0; j < family.M; ++j)
      theta(i, j) = integrate_mode(basis.modes[i], family.support_begin(j), family.support_end(j));
  return theta;
}

}  // namespace parastab
