#pragma once

#include <functional>
#include <vector>

namespace parastab {

// w' = -(C1 - C2 |w|^p) w + |h(t)|
struct OdeProblem {
  double C1 = 1;
  double C2 = 1;
  double p = 1;
  double w0 = 0;
  std::function<double(double)> h;  // empty means h = 0
  double r = 2;

  void validate() const;
  double h_at(double t) const { return h ? h(t) : 0.0; }
};

// Piecewise-linear interpolant of a sampled series, zero outside [t.front(), t.back()].
std::function<double(double)> sampled_function(std::vector<double> t, std::vector<double> v);

struct OdeSeries {
  std::vector<double> t;
  std::vector<double> w;
  bool blowup = false;
};

// Classical RK4 with fixed step; stops once |w| > 1e12.
OdeSeries solve(const OdeProblem& prob, double T, double dt);

// ||h||_{L^r(0,T)} by the trapezoid rule on |h|^r.
double h_Lr_norm(const OdeProblem& prob, double T, int n = 200001);

// Checks e^{-C1(t-s)}|w(s)| <= |w(t)| <= e^{-eps(t-s)}|w(s)| on the dense series.
bool verify_prop_odeh0(const OdeProblem& prob, double T, double dt, double tol = 1e-6);

enum class LemmaStatus { Holds, BoundViolated, HypothesisNotMet };

struct LemmaResult {
  LemmaStatus status;
  double eps;
  double eps_tilde;
  double h_norm;
  double worst_excess;  // max relative amount by which a bound is exceeded
};

LemmaResult verify_lemma_odeh(const OdeProblem& prob, double eps_bar, double T, double dt, double tol = 1e-6,
                              double h_norm = -1);

// Default step of the comparison runs: 1e-4 * min(1, 1/C1).
double default_ode_dt(const OdeProblem& prob);

}  // namespace parastab
