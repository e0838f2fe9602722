#pragma once

#include <Eigen/Dense>

namespace parastab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Tridiagonal matrix stored by diagonals. lower(i) = A(i+1,i), upper(i) = A(i,i+1).
struct Tridiag {
  Vec lower, diag, upper;

  Tridiag() = default;
  explicit Tridiag(Eigen::Index n);

  Eigen::Index size() const { return diag.size(); }
  Vec apply(const Vec& x) const;
  Vec apply_transpose(const Vec& x) const;
  Mat dense() const;

  Tridiag& operator+=(const Tridiag& o);
  Tridiag& operator*=(double s);
};

Tridiag operator+(Tridiag a, const Tridiag& b);
Tridiag operator*(double s, Tridiag a);

// Thomas algorithm without pivoting; throws NumericalFailure on a vanishing pivot.
class TridiagSolver {
 public:
  explicit TridiagSolver(const Tridiag& a);
  Vec solve(const Vec& rhs) const;
  void solve_in_place(Eigen::Ref<Vec> x) const;

 private:
  Vec sub_, cp_, inv_piv_;
};

}  // namespace parastab
