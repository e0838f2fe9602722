#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "parastab/errors.hpp"
#include "parastab/fem.hpp"

using namespace parastab;
using std::numbers::pi;

TEST_CASE("grid invariants") {
  const Grid1D g(8, 2.0);
  CHECK(g.h == 0.25);
  CHECK(g.nodes.size() == 9);
  for (int k = 0; k < 8; ++k) CHECK(g.nodes[k] < g.nodes[k + 1]);
  CHECK_THROWS_AS(Grid1D(3, 1.0), InvalidArgument);
  CHECK_THROWS_AS(Grid1D(8, 0.0), InvalidArgument);
}

TEST_CASE("neumann mass matrix entries") {
  // element pattern (h/6)[[2,1],[1,2]]; with h = 1/4 the full matrix is (1/24) tridiag(1, 4, 1), corners 2
  const FemOperators ops = assemble(Grid1D(4, 1.0), Boundary::Neumann);
  Mat ref = Mat::Zero(5, 5);
  for (int e = 0; e < 4; ++e) {
    ref(e, e) += 2, ref(e + 1, e + 1) += 2;
    ref(e, e + 1) += 1, ref(e + 1, e) += 1;
  }
  ref /= 24;
  CHECK((ops.mass.dense() - ref).cwiseAbs().maxCoeff() < 1e-16);
  CHECK(ops.ndof == 5);
  CHECK(ops.first == 0);
}

TEST_CASE("dirichlet eliminates the boundary nodes") {
  const FemOperators ops = assemble(Grid1D(10, 1.0), Boundary::Dirichlet);
  CHECK(ops.ndof == 9);
  CHECK(ops.first == 1);
  CHECK(ops.mass.diag(0) == doctest::Approx(4 * 0.1 / 6));
  CHECK(ops.stiffness.diag(0) == doctest::Approx(2 / 0.1));
}

TEST_CASE("constants under neumann") {
  for (int N : {4, 17, 100}) {
    const FemOperators ops = assemble(Grid1D(N, 1.5), Boundary::Neumann);
    const Vec one = Vec::Ones(ops.ndof);
    CHECK(std::abs(one.dot(ops.stiffness.apply(one))) < 1e-9);
    CHECK(one.dot(ops.mass.apply(one)) == doctest::Approx(1.5).epsilon(1e-13));
    // partition of unity on interior rows
    for (int i = 1; i + 1 < ops.ndof; ++i)
      CHECK(ops.mass.lower(i - 1) + ops.mass.diag(i) + ops.mass.upper(i) == doctest::Approx(ops.grid.h));
  }
}

TEST_CASE("symmetry and definiteness") {
  std::mt19937 rng(7);
  std::normal_distribution<double> n01;
  for (auto bc : {Boundary::Dirichlet, Boundary::Neumann}) {
    const FemOperators ops = assemble(Grid1D(50, 1.0), bc);
    const Mat Md = ops.mass.dense(), Sd = ops.stiffness.dense();
    CHECK((Md - Md.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((Sd - Sd.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int trial = 0; trial < 50; ++trial) {
      Vec y(ops.ndof);
      for (auto& v : y) v = n01(rng);
      CHECK(y.dot(0.1 * ops.stiffness.apply(y) + ops.mass.apply(y)) > 0);
      CHECK(h_norm(y, ops) <= v_norm(y, ops, 0.1));
    }
  }
}

TEST_CASE("norm examples") {
  const FemOperators neu = assemble(Grid1D(16, 1.0), Boundary::Neumann);
  CHECK(h_norm(Vec::Zero(neu.ndof), neu) == 0.0);
  CHECK(h_norm(Vec::Ones(neu.ndof), neu) == doctest::Approx(1.0));
  CHECK(v_norm(Vec::Ones(neu.ndof), neu, 0.1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(h_norm(Vec::Ones(3), neu), InvalidArgument);

  const FemOperators ops = assemble(Grid1D(1000, 1.0), Boundary::Dirichlet);
  const Vec y = sample([](double x) { return std::sqrt(2.0) * std::sin(pi * x); }, ops);
  CHECK(std::abs(h_norm(y, ops) - 1) <= 1e-3);
  const double v2 = std::pow(v_norm(y, ops, 0.1), 2);
  CHECK(std::abs(v2 - (0.1 * pi * pi + 1)) / (0.1 * pi * pi + 1) <= 1e-3);
}

TEST_CASE("norm quadrature converges at second order") {
  const auto f = [](double x) { return std::sin(3 * pi * x) + x * (1 - x); };
  // exact: int f^2 and int f'^2 on (0,1)
  const double h2_exact = 0.5 + 1.0 / 30 + 2 * (4 / (27 * pi * pi * pi));
  const double grad_exact = 9 * pi * pi / 2 + 1.0 / 3 + 8 / (3 * pi);
  std::vector<double> err;
  for (int N : {250, 500, 1000}) {
    const FemOperators ops = assemble(Grid1D(N, 1.0), Boundary::Dirichlet);
    const Vec y = sample(f, ops);
    const double v2 = std::pow(v_norm(y, ops, 0.1), 2);
    err.push_back(std::abs(v2 - (0.1 * grad_exact + h2_exact)));
  }
  CHECK(err[0] / err[1] == doctest::Approx(4).epsilon(0.05));
  CHECK(err[1] / err[2] == doctest::Approx(4).epsilon(0.05));
}

TEST_CASE("reaction and advection assembly") {
  const FemOperators ops = assemble(Grid1D(20, 1.0), Boundary::Dirichlet);
  const Tridiag r1 = assemble_reaction(ops, [](double, double) { return 1.0; }, 0.0);
  CHECK(r1.dense().cwiseAbs().maxCoeff() == 0.0);
  const Tridiag b0 = assemble_advection(ops, [](double, double) { return 0.0; }, 0.0);
  CHECK(b0.dense().cwiseAbs().maxCoeff() == 0.0);
  const Tridiag r2 = assemble_reaction(ops, [](double, double) { return 2.0; }, 0.0);
  CHECK((r2.dense() - ops.mass.dense()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("advection weak form against an independent element loop") {
  const auto b = [](double t, double x) { return 1 + x * t; };
  const FemOperators ops = assemble(Grid1D(12, 1.0), Boundary::Neumann);
  const double h = ops.grid.h, t = 0.7;
  Mat ref = Mat::Zero(13, 13);
  // int b y' phi_i: on element e, y' = (y_{e+1}-y_e)/h, int phi_i = h/2
  for (int e = 0; e < 12; ++e) {
    const double bm = b(t, (e + 0.5) * h);
    for (int i : {e, e + 1}) {
      ref(i, e) -= bm / 2;
      ref(i, e + 1) += bm / 2;
    }
  }
  CHECK((assemble_advection(ops, b, t).dense() - ref).cwiseAbs().maxCoeff() < 1e-14);
  // constants are annihilated: b y' = 0
  CHECK(assemble_advection(ops, b, t).apply(Vec::Ones(13)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("sampling") {
  const Grid1D g(4, 1.0);
  CHECK(sample([](double) { return 0.0; }, g).cwiseAbs().maxCoeff() == 0.0);
  const Vec s = sample([](double x) { return std::sin(2 * pi * x); }, g);
  const double ref[] = {0, 1, 0, -1, 0};
  for (int i = 0; i < 5; ++i) CHECK(std::abs(s(i) - ref[i]) < 1e-15);
  const Vec s2 = sample([](double x) { return 2 * std::sin(2 * pi * x); }, g);
  CHECK((s2 - 2 * s).norm() < 1e-15);
  CHECK_THROWS_AS(sample([](double x) { return 1 / (x - 0.5); }, g), InvalidArgument);
  CHECK_THROWS_AS(sample([](double) { return NAN; }, g), InvalidArgument);
}

TEST_CASE("mode loads equal the exact integrals against hats") {
  const FemOperators ops = assemble(Grid1D(10, 1.0), Boundary::Dirichlet);
  const Mode e = eigenmode({1.0, Boundary::Dirichlet, 1.0}, 3);
  const Vec g = mode_load(e, ops);
  for (int d = 0; d < ops.ndof; ++d) {
    const double xk = ops.x(d), h = ops.grid.h;
    double s = 0;  // fine Simpson on the hat support
    const int n = 2000;
    for (int q = 0; q <= n; ++q) {
      const double x = xk - h + 2 * h * q / n;
      const double w = (q == 0 || q == n) ? 1 : (q % 2 ? 4 : 2);
      s += w * e(x) * std::max(0.0, 1 - std::abs(x - xk) / h);
    }
    s *= 2 * h / n / 3;
    CHECK(g(d) == doctest::Approx(s).epsilon(1e-9));
  }
}
