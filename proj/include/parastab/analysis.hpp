#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "parastab/feedback.hpp"
#include "parastab/model.hpp"
#include "parastab/projection.hpp"
#include "parastab/stepper.hpp"

namespace parastab {

// alpha_{M+} - (6 + 4||P||^2) C_rc^2
double linear_margin(double alpha_Mplus, double proj_norm, double C_rc);

struct FeedbackAssumptionParams {
  double C_q0 = 1, C_q1 = 1, C_q2 = 1, C_q3 = 1;
  double xi = 1;
  double lambda = 1;
  double beta1 = 1, beta2 = 0, eta1 = 1, eta2 = 0;
  double r_frak = 2;

  static FeedbackAssumptionParams defaults(FChoice f, double lambda = 1.0);
  // Empty string when every inequality of the assumption holds, else the first failure.
  std::string check(const ExponentRecord& exps) const;
};

// Eigen coordinates of q(t) = exp(-D t) q(0).
Vec q_closed_form(const Vec& c0, const Vec& D, double t);
double q_vnorm(const Vec& c, const SpectralBasis& basis);
double q_danorm(const Vec& c, const SpectralBasis& basis);

// (1 + ||q||_V^{2(p+1)}) (1 + ||q||_{D(A)}^{||zeta2/(1-delta2)||}) at t = 0, where both norms peak.
double frak_q(const Vec& c0, const SpectralBasis& basis, const ExponentRecord& exps);

struct McalSeries {
  std::vector<double> t;
  std::vector<double> norm;  // ||M(q(t))||_H
  double L2r_norm = 0;       // ||M(q)||_{L^{2r}(0,T_h; H)}
  double h_base = 0;         // L2r_norm^2 = gamma2 * ||h||_{L^r}
};

McalSeries mcal_q(const Vec& c0, const ObliqueProjector& proj, const SemilinearModel& model, const FemOperators& ops,
                  FChoice f, double lambda, double r_frak, int nt = 2001);

struct FrakInputs {
  double alpha_Mplus = 0;
  double proj_norm = 1;
  double C_rc = 0;
  double C_NN2 = 1;
  double r_frak = 2;
  double frak_q = 1;
  double h_base = 0;
  double Q0_vnorm = 0;
  ExponentRecord exps;
};

struct FrakValues {
  double a0, a1, a2, p, h_Lr;
};

FrakValues frak_values(const FrakInputs& in, double g1, double g2, double g3);
// Right-hand side of the infimum condition for one (gamma, eps_bar).
double suffalpha_objective(const FrakInputs& in, double g1, double g2, double g3, double eps_bar);

struct SearchOptions {
  int gamma_grid = 8;
  int eps_grid = 25;
  int rounds = 3;
  double gamma_min = 1e-6;
  double eps_min = 1e-10;
  double eps_max = 1e10;
};

struct StabilityReport {
  double linear_margin = 0;
  bool satisfied = false;
  std::array<double, 3> gamma{0, 0, 0};
  double eps_bar = 0;
  double inf_J = 0;
  double eps = 0;
  double eps_tilde = 0;
  double mu_fit = 0;
  double C_fit = 0;
  double q_residual = 0;
  std::string diagnostics;
};

StabilityReport check_suffalpha(const FrakInputs& in, const SearchOptions& opt = {});

struct DecayFit {
  double C_fit;
  double mu_fit;
  std::size_t n_used;
};

DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& v, double tail_fraction);
DecayFit decay_fit(const Trajectory& tr, double tail_fraction);

struct DecouplingResidual {
  double residual;
  bool decoupling_expected;
};

// max over stored snapshots of |c(t) - exp(-D t) c(t_0)|, c = eigen coordinates of y.
DecouplingResidual q_decoupling_residual(const Trajectory& tr, const ObliqueProjector& proj, const FeedbackConfig& fb);

struct HnormBoundParams {
  double C_bar = 1;
  double beta2 = 0;
  double eta2 = 0;
  double r_frak = 2;
  double z2d2 = 0;
};

// C (1 + alpha^beta2 + alpha^{r eta2 ||zeta2+delta2||}) ||q(0)||_V^2
double hnorm_bound_eval(const HnormBoundParams& p, double q0_vnorm, double alpha_M);

// ||Q(t)||_V^2 <= e^{-eps t}||Q0||_V^2 + int_0^t e^{-eps~(t-s)} h(s) ds on the snapshots,
// with h = ||M(q)||_H^2/gamma2 interpolated from the series. Returns the worst ratio lhs/rhs.
double q_subsystem_bound_ratio(const Trajectory& tr, const ObliqueProjector& proj, const FemOperators& ops, double nu,
                               const McalSeries& mcal, double gamma2, double eps, double eps_tilde);

// Smallest M in [1, M_max] for which check_suffalpha passes, assuming the pass set is
// upward closed in M (true when only alpha_{M+} varies with M). Returns 0 if none.
int minimal_passing_M(const std::function<FrakInputs(int)>& inputs_for_M, int M_max, const SearchOptions& opt = {});

}  // namespace parastab
