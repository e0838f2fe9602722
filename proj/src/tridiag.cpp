#include "parastab/tridiag.hpp"

#include <cmath>

#include "parastab/errors.hpp"

namespace parastab {

Tridiag::Tridiag(Eigen::Index n)
    : lower(Vec::Zero(n > 0 ? n - 1 : 0)),
      diag(Vec::Zero(n)),
      upper(Vec::Zero(n > 0 ? n - 1 : 0)) {}

Vec Tridiag::apply(const Vec& x) const {
  const Eigen::Index n = size();
  if (x.size() != n) throw InvalidArgument("Tridiag::apply: dimension mismatch");
  Vec y = diag.cwiseProduct(x);
  if (n > 1) {
    y.head(n - 1) += upper.cwiseProduct(x.tail(n - 1));
    y.tail(n - 1) += lower.cwiseProduct(x.head(n - 1));
  }
  return y;
}

Vec Tridiag::apply_transpose(const Vec& x) const {
  Tridiag t;
  t.diag = diag;
  t.lower = upper;
  t.upper = lower;
  return t.apply(x);
}

Mat Tridiag::dense() const {
  const Eigen::Index n = size();
  Mat a = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = diag(i);
    if (i + 1 < n) {
      a(i, i + 1) = upper(i);
      a(i + 1, i) = lower(i);
    }
  }
  return a;
}

Tridiag& Tridiag::operator+=(const Tridiag& o) {
  if (o.size() != size()) throw InvalidArgument("Tridiag: size mismatch");
  lower += o.lower;
  diag += o.diag;
  upper += o.upper;
  return *this;
}

Tridiag& Tridiag::operator*=(double s) {
  lower *= s;
  diag *= s;
  upper *= s;
  return *this;
}

Tridiag operator+(Tridiag a, const Tridiag& b) { return a += b; }
Tridiag operator*(double s, Tridiag a) { return a *= s; }

TridiagSolver::TridiagSolver(const Tridiag& a) {
  const Eigen::Index n = a.size();
  sub_ = a.lower;
  cp_ = Vec::Zero(n);
  inv_piv_ = Vec::Zero(n);
  double piv = a.diag(0);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i > 0) piv = a.diag(i) - a.lower(i - 1) * cp_(i - 1);
    if (!(std::abs(piv) > 1e-300) || !std::isfinite(piv))
      throw NumericalFailure("tridiagonal solve: zero pivot");
    inv_piv_(i) = 1.0 / piv;
    cp_(i) = (i + 1 < n) ? a.upper(i) * inv_piv_(i) : 0.0;
  }
}

void TridiagSolver::solve_in_place(Eigen::Ref<Vec> x) const {
  const Eigen::Index n = inv_piv_.size();
  if (x.size() != n) throw InvalidArgument("TridiagSolver: dimension mismatch");
  x(0) *= inv_piv_(0);
  for (Eigen::Index i = 1; i < n; ++i) x(i) = (x(i) - sub_(i - 1) * x(i - 1)) * inv_piv_(i);
  for (Eigen::Index i = n - 2; i >= 0; --i) x(i) -= cp_(i) * x(i + 1);
}

Vec TridiagSolver::solve(const Vec& rhs) const {
  Vec x = rhs;
  solve_in_place(x);
  return x;
}

}  // namespace parastab
