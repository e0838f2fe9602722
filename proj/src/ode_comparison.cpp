#include "parastab/ode_comparison.hpp"

#include <algorithm>
#include <cmath>

#include "parastab/errors.hpp"

namespace parastab {

void OdeProblem::validate() const {
  if (!(C1 > 0) || !(C2 > 0)) throw InvalidArgument("C1 and C2 must be positive");
  if (!(p > 0)) throw InvalidArgument("p must be positive");
  if (!(r > 1)) throw InvalidArgument("r must exceed 1");
  if (!std::isfinite(w0)) throw InvalidArgument("w0 must be finite");
}

std::function<double(double)> sampled_function(std::vector<double> t, std::vector<double> v) {
  if (t.size() != v.size() || t.size() < 2) throw InvalidArgument("sampled_function: need matching series of length >= 2");
  return [t = std::move(t), v = std::move(v)](double s) {
    if (s < t.front() || s > t.back()) return 0.0;
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    const std::size_t hi = std::min<std::size_t>(it - t.begin(), t.size() - 1), lo = hi - 1;
    const double w = (s - t[lo]) / (t[hi] - t[lo]);
    return (1 - w) * v[lo] + w * v[hi];
  };
}

double default_ode_dt(const OdeProblem& prob) { return 1e-4 * std::min(1.0, 1.0 / prob.C1); }

OdeSeries solve(const OdeProblem& prob, double T, double dt) {
  prob.validate();
  if (!(T > 0) || !(dt > 0)) throw InvalidArgument("solve: T and dt must be positive");
  auto f = [&](double t, double w) { return -(prob.C1 - prob.C2 * std::pow(std::abs(w), prob.p)) * w + std::abs(prob.h_at(t)); };
  OdeSeries s;
  const long long n = static_cast<long long>(std::ceil(T / dt - 1e-9));
  s.t.reserve(n + 1);
  s.w.reserve(n + 1);
  double w = prob.w0;
  s.t.push_back(0);
  s.w.push_back(w);
  for (long long i = 0; i < n; ++i) {
    const double t = i * dt;
    const double k1 = f(t, w);
    const double k2 = f(t + dt / 2, w + dt / 2 * k1);
    const double k3 = f(t + dt / 2, w + dt / 2 * k2);
    const double k4 = f(t + dt, w + dt * k3);
    w += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    s.t.push_back((i + 1) * dt);
    s.w.push_back(w);
    if (!(std::abs(w) <= 1e12)) {
      s.blowup = true;
      break;
    }
  }
  return s;
}

double h_Lr_norm(const OdeProblem& prob, double T, int n) {
  if (!prob.h) return 0.0;
  double acc = 0, prev = std::pow(std::abs(prob.h_at(0)), prob.r);
  for (int i = 1; i < n; ++i) {
    const double t = T * i / (n - 1);
    const double v = std::pow(std::abs(prob.h_at(t)), prob.r);
    acc += 0.5 * (T / (n - 1)) * (prev + v);
    prev = v;
  }
  return std::pow(acc, 1.0 / prob.r);
}

bool verify_prop_odeh0(const OdeProblem& prob, double T, double dt, double tol) {
  prob.validate();
  if (prob.h) {
    for (int i = 0; i <= 100; ++i)
      if (prob.h_at(T * i / 100) != 0) throw InvalidArgument("verify_prop_odeh0: requires h = 0");
  }
  const double wbar = std::pow(prob.C1 / prob.C2, 1.0 / prob.p);
  if (!(std::abs(prob.w0) < wbar)) throw InvalidArgument("verify_prop_odeh0: |w0| must be below (C1/C2)^(1/p)");
  const double eps = prob.C1 - prob.C2 * std::pow(std::abs(prob.w0), prob.p);
  const OdeSeries s = solve(prob, T, dt);
  if (s.blowup) return false;
  for (std::size_t i = 1; i < s.w.size(); ++i) {
    const double a = std::abs(s.w[i - 1]), b = std::abs(s.w[i]);
    const double d = s.t[i] - s.t[i - 1];
    if (b < std::exp(-prob.C1 * d) * a * (1 - tol)) return false;
    if (b > std::exp(-eps * d) * a * (1 + tol)) return false;
    // and from s = 0 to avoid accumulation of per-step slack
    const double w0 = std::abs(prob.w0);
    if (b < std::exp(-prob.C1 * s.t[i]) * w0 * (1 - tol)) return false;
    if (b > std::exp(-eps * s.t[i]) * w0 * (1 + tol)) return false;
  }
  return true;
}

LemmaResult verify_lemma_odeh(const OdeProblem& prob, double eps_bar, double T, double dt, double tol, double hn) {
  prob.validate();
  LemmaResult res{LemmaStatus::Holds, 0, 0, 0, 0};
  const double r = prob.r, p = prob.p, w0 = std::abs(prob.w0);
  res.h_norm = hn >= 0 ? hn : h_Lr_norm(prob, T);
  const double pref = std::pow(r / (r - 1) * eps_bar, -(r - 1) / r);
  const double lhs = w0 + pref * res.h_norm;
  res.eps = prob.C1 - prob.C2 * std::pow(w0, p);
  res.eps_tilde = prob.C1 - prob.C2 * (p + 1) * std::pow(lhs, p);
  if (!(eps_bar > 0) || !(eps_bar < prob.C1) || !(lhs < std::pow((prob.C1 - eps_bar) / (prob.C2 * (p + 1)), 1.0 / p))) {
    res.status = LemmaStatus::HypothesisNotMet;
    return res;
  }
  const OdeSeries s = solve(prob, T, dt);
  if (s.blowup) {
    res.status = LemmaStatus::BoundViolated;
    res.worst_excess = std::numeric_limits<double>::infinity();
    return res;
  }
  // conv(t) = int_0^t e^{-eps~(t-s)} |h(s)| ds, advanced with the trapezoid rule
  double conv = 0;
  const double bound2 = lhs;
  for (std::size_t i = 0; i < s.w.size(); ++i) {
    if (i > 0) {
      const double d = s.t[i] - s.t[i - 1];
      const double decay = std::exp(-res.eps_tilde * d);
      conv = decay * conv + 0.5 * d * (decay * std::abs(prob.h_at(s.t[i - 1])) + std::abs(prob.h_at(s.t[i])));
    }
    const double a = std::abs(s.w[i]);
    const double bound1 = std::exp(-res.eps * s.t[i]) * w0 + conv;
    const double scale = std::max(bound1, 1e-300);
    res.worst_excess = std::max(res.worst_excess, (a - bound1) / scale);
    res.worst_excess = std::max(res.worst_excess, (a - bound2) / std::max(bound2, 1e-300));
  }
  if (res.worst_excess > tol) res.status = LemmaStatus::BoundViolated;
  return res;
}

}  // namespace parastab
