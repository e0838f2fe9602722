#include "parastab/feedback.hpp"

#include <algorithm>
#include <cmath>

#include "parastab/errors.hpp"

namespace parastab {

const char* to_string(KType k) {
  switch (k) {
    case KType::Off: return "off";
    case KType::LinearizationBased: return "klinz";
    case KType::Nonlinear: return "knonl";
  }
  return "?";
}

const char* to_string(FChoice f) { return f == FChoice::LambdaId ? "lambda" : "AplusLambda"; }

KType ktype_from_string(const std::string& s) {
  if (s == "off") return KType::Off;
  if (s == "klinz" || s == "Klinz") return KType::LinearizationBased;
  if (s == "knonl" || s == "Knonl") return KType::Nonlinear;
  throw InvalidArgument("unknown ktype '" + s + "' (off, klinz, knonl)");
}

FChoice fchoice_from_string(const std::string& s) {
  if (s == "lambda") return FChoice::LambdaId;
  if (s == "AplusLambda" || s == "aplus") return FChoice::APlusLambdaId;
  throw InvalidArgument("unknown F choice '" + s + "' (lambda, AplusLambda)");
}

void FeedbackConfig::validate() const {
  if (!(lambda > 0)) throw InvalidArgument("lambda must be positive");
  auto iv = feed_on;
  std::sort(iv.begin(), iv.end());
  for (std::size_t i = 0; i < iv.size(); ++i) {
    if (!(iv[i].second > iv[i].first)) throw InvalidArgument("feed_on interval must have t1 > t0");
    if (i > 0 && iv[i].first < iv[i - 1].second) throw InvalidArgument("feed_on intervals overlap");
  }
}

bool FeedbackConfig::active(double t) const {
  if (ktype == KType::Off) return false;
  if (feed_on.empty()) return true;
  for (const auto& [a, b] : feed_on)
    if (t >= a && t < b) return true;
  return false;
}

Vec f_diagonal(const SpectralBasis& basis, FChoice f, double lambda) {
  Vec d(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    d(i) = (f == FChoice::LambdaId) ? lambda : basis.alphas[i] + lambda;
  return d;
}

Vec apply_F(const SpectralBasis& basis, FChoice f, double lambda, const Vec& q) {
  if (q.size() != static_cast<Eigen::Index>(basis.size())) throw InvalidArgument("apply_F: coefficient length mismatch");
  return f_diagonal(basis, f, lambda).cwiseProduct(q);
}

FeedbackForce feedback_force(const FeedbackConfig& cfg, const ObliqueProjector* proj, const SemilinearModel& model,
                             const FemOperators& ops, double t, const Vec& y, const Vec* nonlin) {
  const int m = proj ? proj->m() : 0;
  FeedbackForce out{Vec::Zero(ops.ndof), Vec::Zero(m)};
  if (!cfg.active(t) || proj == nullptr || m == 0) return out;
  const Tridiag K = linear_operator(model, ops, t);
  Vec rhs = proj->E().transpose() * K.apply(y);
  if (cfg.ktype == KType::Nonlinear && !model.linear()) {
    const Vec n = nonlin ? *nonlin : eval_nonlinearity(model, t, y, ops);
    rhs += proj->g().transpose() * n;
  }
  const Vec c = proj->eigen_coeffs(y);
  rhs -= proj->gram() * apply_F(proj->basis(), cfg.f_choice, cfg.lambda, c);
  out.u = proj->solve_theta(rhs);
  out.force = proj->Phi() * out.u;
  return out;
}

std::vector<double> cumulative_control_energy(const ControlRecord& rec, double r_exp) {
  if (!(r_exp > 1)) throw InvalidArgument("control energy exponent must exceed 1");
  std::vector<double> out(rec.times.size(), 0.0);
  double acc = 0.0;
  const double p = 2 * r_exp;
  for (std::size_t i = 1; i < rec.times.size(); ++i) {
    const double dt = rec.times[i] - rec.times[i - 1];
    acc += 0.5 * dt * (std::pow(rec.h_norms[i - 1], p) + std::pow(rec.h_norms[i], p));
    out[i] = std::pow(acc, 1.0 / p);
  }
  return out;
}

double control_energy(const ControlRecord& rec, double r_exp) {
  if (rec.times.size() < 2) return 0.0;
  return cumulative_control_energy(rec, r_exp).back();
}

}  // namespace parastab
