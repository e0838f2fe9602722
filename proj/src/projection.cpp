#include "parastab/projection.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "parastab/errors.hpp"

namespace parastab {

ObliqueProjector::ObliqueProjector(const SpectralBasis& basis, const ActuatorFamily& family,
                                   const FemOperators& ops, double max_condition)
    : basis_(basis) {
  const int m = static_cast<int>(basis.size());
  if (m != family.M) throw InvalidArgument("projector: basis and actuator family sizes differ");
  if (family.loads.rows() != ops.ndof) throw InvalidArgument("projector: actuators built on another grid");
  g_.resize(ops.ndof, m);
  for (int i = 0; i < m; ++i) g_.col(i) = mode_load(basis.modes[i], ops);
  E_ = mass_solve(ops, g_);
  G_ = g_.transpose() * E_;
  Phi_ = family.Phi;
  theta_h_ = g_.transpose() * Phi_;
  if (family.indicator) theta_c_ = inner_products(family, basis);

  // Columns scaled to unit actuators so that a tiny Theta counts as singular even when m = 1.
  Mat scaled = theta_h_;
  for (int j = 0; j < m; ++j) {
    const double n = std::sqrt(std::max(0.0, family.loads.col(j).dot(Phi_.col(j))));
    if (n > 0) scaled.col(j) /= n;
  }
  Eigen::JacobiSVD<Mat> svd(scaled);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  cond_ = smin > 0 ? std::max(1.0, s(0)) / smin : std::numeric_limits<double>::infinity();
  if (!(cond_ <= max_condition)) {
    std::ostringstream os;
    os << "direct sum U_M + E_M^perp fails: cond(Theta) = " << cond_;
    throw DirectSumViolation(os.str(), cond_);
  }
  theta_lu_.compute(theta_h_);
  G_lu_.compute(G_);
}

Vec ObliqueProjector::actuator_coeffs(const Vec& h) const {
  return theta_lu_.solve(g_.transpose() * h);
}

Vec ObliqueProjector::apply_PU(const Vec& h) const { return Phi_ * actuator_coeffs(h); }

Vec ObliqueProjector::apply_PEperp_U(const Vec& h) const { return h - apply_PU(h); }

Vec ObliqueProjector::eigen_coeffs(const Vec& y) const { return G_lu_.solve(g_.transpose() * y); }

Vec ObliqueProjector::apply_PE(const Vec& h) const { return E_ * eigen_coeffs(h); }

double operator_norm(const ObliqueProjector* proj, const FemOperators& ops, const PowerIterationOptions& opt) {
  if (proj == nullptr || proj->m() == 0) return 0.0;
  return operator_norm(*proj, ops, opt);
}

double operator_norm(const ObliqueProjector& proj, const FemOperators& ops, const PowerIterationOptions& opt) {
  if (proj.m() == 0) return 0.0;
  // v <- M^{-1} P^T M P v = E Theta^{-T} (Phi^T M Phi) Theta^{-1} g^T v
  Mat PhiMPhi(proj.m(), proj.m());
  for (int j = 0; j < proj.m(); ++j) PhiMPhi.col(j) = proj.Phi().transpose() * ops.mass.apply(proj.Phi().col(j));
  Eigen::PartialPivLU<Mat> tlu(proj.theta());
  Mat thetaT = proj.theta().transpose();
  Eigen::PartialPivLU<Mat> ttlu(thetaT);

  std::mt19937 rng(opt.seed);
  std::normal_distribution<double> nd;
  Vec v(ops.ndof);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = nd(rng);
  v /= h_norm(v, ops);
  double lam = 0.0;
  for (int it = 0; it < opt.max_iter; ++it) {
    Vec w = proj.E() * ttlu.solve(PhiMPhi * tlu.solve(proj.g().transpose() * v));
    const double mw = w.dot(ops.mass.apply(v));  // Rayleigh quotient in the M inner product
    const double nw = h_norm(w, ops);
    if (!(nw > 0)) return 0.0;
    v = w / nw;
    if (it > 0 && std::abs(mw - lam) <= opt.tol * std::abs(mw)) return std::sqrt(mw);
    lam = mw;
  }
  throw NumericalFailure("operator_norm: power iteration did not converge");
}

double operator_norm_reduced(const ObliqueProjector& proj, const FemOperators& ops) {
  // nonzero spectrum of M^{-1}P^T M P equals that of the symmetric pencil
  // (g^T E)^{1/2} Theta^{-T} Phi^T M Phi Theta^{-1} (g^T E)^{1/2}
  const int m = proj.m();
  if (m == 0) return 0.0;
  Mat PhiMPhi(m, m);
  for (int j = 0; j < m; ++j) PhiMPhi.col(j) = proj.Phi().transpose() * ops.mass.apply(proj.Phi().col(j));
  Mat Tinv = proj.theta().inverse();
  Mat B = Tinv.transpose() * PhiMPhi * Tinv;
  Eigen::SelfAdjointEigenSolver<Mat> gs(proj.gram());
  Mat Gh = gs.operatorSqrt();
  Eigen::SelfAdjointEigenSolver<Mat> es(Gh * B * Gh);
  return std::sqrt(es.eigenvalues().maxCoeff());
}

}  // namespace parastab
