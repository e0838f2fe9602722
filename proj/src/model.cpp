#include "parastab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "parastab/errors.hpp"

namespace parastab {

void SemilinearModel::validate(int dims) const {
  domain.validate();
  if (!a || !b) throw InvalidArgument("model coefficients a and b must be set");
  if (C_rc < 0 || C_N < 0) throw InvalidArgument("C_rc and C_N must be nonnegative");
  for (const auto& t : reaction) {
    if (!(t.r > 1)) throw InvalidArgument("reaction exponent must exceed 1");
    if (dims == 3 && !(t.r < 5)) throw InvalidArgument("reaction exponent must be below 5 in 3D");
  }
  for (const auto& t : convection) {
    if (!(t.s >= 1)) throw InvalidArgument("convection exponent must be at least 1");
    if (dims == 3 && !(t.s < 2)) throw InvalidArgument("convection exponent must be below 2 in 3D");
  }
}

ExponentRecord make_exponent_record(std::vector<ExponentTuple> tuples) {
  ExponentRecord rec;
  for (const auto& e : tuples) {
    if (e.z1 < 0 || e.z2 < 0 || e.d1 < 0 || e.d2 < 0) throw InvalidArgument("exponents must be nonnegative");
    if (!(e.z2 + e.d2 < 1)) throw InvalidArgument("exponent tuple violates zeta2 + delta2 < 1");
    if (!(e.d1 + e.d2 >= 1 - 1e-14)) throw InvalidArgument("exponent tuple violates delta1 + delta2 >= 1");
    rec.max_z2d2 = std::max(rec.max_z2d2, e.z2 + e.d2);
    rec.max_ratio = std::max(rec.max_ratio, (e.z1 + e.d1) / (1 - e.z2 - e.d2));
    rec.max_z2_over = std::max(rec.max_z2_over, e.z2 / (1 - e.d2));
  }
  rec.tuples = std::move(tuples);
  rec.frak_p = rec.tuples.empty() ? 0.0 : rec.max_ratio - 1.0;
  return rec;
}

ExponentRecord exponent_record(const SemilinearModel& model, int dims) {
  if (dims < 1 || dims > 3) throw InvalidArgument("dims must be 1, 2 or 3");
  model.validate(dims);
  std::vector<ExponentTuple> t;
  for (const auto& rt : model.reaction) {
    const double r = rt.r;
    if (dims < 3 || r <= 3) {
      t.push_back({r - 1, 0, 1, 0});
    } else {
      const double q = 4 * r;
      t.push_back({(2 * r + 6) * (r - 1) / q, (2 * r - 6) * (r - 1) / q, (2 * r + 6) / q, (2 * r - 6) / q});
    }
  }
  for (const auto& ct : model.convection) {
    const double s = ct.s;
    if (dims < 3) {
      t.push_back({s, 0, 1, 0});
      t.push_back({s - 1, 0, 2, 0});
    } else if (s == 1) {
      t.push_back({1, 0, 0.5, 0.5});
      t.push_back({0.5, 0.5, 1, 0});
    } else {
      const double kappa = s / (2 * (s - 1));  // midpoint of (1, 1/(s-1))
      t.push_back({(s + 1) / 2, (s - 1) / 2, 0.5, 0.5});
      t.push_back({kappa * (3 - s) / 2, kappa * (s - 1) / 2, 0.5, 0.5});
      t.push_back({(s - 1) * kappa / (kappa - 1), 0, 0.5, 0.5});
      t.push_back({s - 0.5, 0.5, (3 - s) / 2, (s - 1) / 2});
    }
  }
  return make_exponent_record(std::move(t));
}

Vec eval_nonlinearity(const SemilinearModel& model, double t, const Vec& y, const FemOperators& ops) {
  if (y.size() != ops.ndof) throw InvalidArgument("eval_nonlinearity: dimension mismatch");
  Vec out = Vec::Zero(ops.ndof);
  if (model.linear()) return out;
  Vec dy;
  if (!model.convection.empty()) {
    const Vec full = ops.extend(y);
    const int N = ops.grid.N;
    const double h = ops.grid.h;
    Vec g(N + 1);
    g(0) = (full(1) - full(0)) / h;
    g(N) = (full(N) - full(N - 1)) / h;
    for (int k = 1; k < N; ++k) g(k) = (full(k + 1) - full(k - 1)) / (2 * h);
    dy = ops.restrict_full(g);
  }
  for (int i = 0; i < ops.ndof; ++i) {
    const double x = ops.x(i);
    const double v = y(i), av = std::abs(v);
    double s = 0.0;
    for (const auto& rt : model.reaction) s += rt.amp(t, x) * std::pow(av, rt.r - 1) * v;
    for (const auto& ct : model.convection) s += ct.amp(t, x) * dy(i) * std::pow(av, ct.s - 1) * v;
    out(i) = s;
  }
  return out;
}

CoefficientBounds coefficient_bounds(const SemilinearModel& model, double T, int nt, int nx) {
  CoefficientBounds cb{0, 0, 0, 0};
  for (int i = 0; i < nt; ++i) {
    const double t = T * i / std::max(1, nt - 1);
    for (int j = 0; j < nx; ++j) {
      const double x = model.domain.L * j / std::max(1, nx - 1);
      const double a = model.a(t, x), b = model.b(t, x);
      cb.max_abs_a = std::max(cb.max_abs_a, std::abs(a));
      cb.max_abs_a_minus_1 = std::max(cb.max_abs_a_minus_1, std::abs(a - 1));
      cb.max_abs_b = std::max(cb.max_abs_b, std::abs(b));
    }
  }
  cb.C_rc = cb.max_abs_a_minus_1 + cb.max_abs_b / std::sqrt(model.domain.nu);
  return cb;
}

BenchmarkSetup benchmark_model(double c_N, double c_ic, int wave) {
  const double pi = std::numbers::pi;
  const double nu = 0.1;
  BenchmarkSetup s;
  s.model.domain = {1.0, Boundary::Dirichlet, nu};
  s.model.a = [nu, pi](double t, double x) { return -35 * nu * pi * pi - 10 * std::abs(std::cos(4 * t) * x * std::cos(x * t)); };
  s.model.b = [pi](double t, double x) { return -4 * std::cos(3 * pi * t) - 5 * (1 - x) * (1 - x) + 2; };
  if (c_N != 0) s.model.reaction.push_back({[c_N](double, double) { return -c_N; }, 13.0 / 4.0});
  s.model.C_N = std::abs(c_N);
  s.model.C_rc = coefficient_bounds(s.model, 5.0).C_rc;
  s.y0 = [c_ic, wave, pi](double x) { return c_ic * std::sin(wave * pi * x); };
  return s;
}

}  // namespace parastab

namespace parastab {

Tridiag linear_operator(const SemilinearModel& model, const FemOperators& ops, double t) {
  Tridiag k = model.domain.nu * ops.stiffness;
  k += ops.mass;
  k += assemble_reaction(ops, model.a, t);
  k += assemble_advection(ops, model.b, t);
  return k;
}

}  // namespace parastab
