#include "parastab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "parastab/errors.hpp"

namespace parastab {

double linear_margin(double alpha_Mplus, double proj_norm, double C_rc) {
  if (alpha_Mplus < 0 || proj_norm < 0 || C_rc < 0) throw InvalidArgument("linear_margin: inputs must be nonnegative");
  return alpha_Mplus - (6.0 + 4.0 * proj_norm * proj_norm) * C_rc * C_rc;
}

FeedbackAssumptionParams FeedbackAssumptionParams::defaults(FChoice f, double lambda) {
  FeedbackAssumptionParams p;
  p.lambda = lambda;
  if (f == FChoice::APlusLambdaId) {
    p.beta1 = 1, p.beta2 = 0, p.eta1 = 1, p.eta2 = 0;
  } else {
    // A q - lambda q needs the D(A) norm of q(0): (beta1, beta2) = (0, 1)
    p.beta1 = 0, p.beta2 = 1, p.eta1 = 1, p.eta2 = 0;
  }
  return p;
}

std::string FeedbackAssumptionParams::check(const ExponentRecord& e) const {
  if (C_q0 < 0 || C_q2 < 0 || C_q3 < 0) return "C_q0, C_q2, C_q3 must be nonnegative";
  if (C_q1 < 1) return "C_q1 must be at least 1";
  if (xi < 1) return "xi must be at least 1";
  if (!(lambda > 0)) return "lambda must be positive";
  if (beta1 < 0 || beta2 < 0 || eta1 < 0 || eta2 < 0) return "beta and eta must be nonnegative";
  const double rmax = e.max_z2d2 > 0 ? 1.0 / e.max_z2d2 : std::numeric_limits<double>::infinity();
  if (!(r_frak > 1 && r_frak < rmax)) return "r must lie in (1, 1/||zeta2+delta2||)";
  if (beta1 + beta2 < 1) return "beta1 + beta2 >= 1 fails";
  double mx = 0;
  for (const auto& t : e.tuples) mx = std::max(mx, t.z1 + t.d1 + (eta1 + eta2) * (t.z2 + t.d2));
  if (!e.tuples.empty() && r_frak * mx < 1) return "r ||zeta1+delta1+(eta1+eta2)(zeta2+delta2)|| >= 1 fails";
  const double room = 1 - e.max_z2_over;
  if (!(e.frak_p * beta2 < room)) return "p beta2 < 1 - ||zeta2/(1-delta2)|| fails";
  if (!(e.frak_p * e.max_z2d2 * r_frak * eta2 < room)) return "p ||zeta2+delta2|| r eta2 < 1 - ||zeta2/(1-delta2)|| fails";
  return {};
}

Vec q_closed_form(const Vec& c0, const Vec& D, double t) { return (-D * t).array().exp().matrix().cwiseProduct(c0); }

double q_vnorm(const Vec& c, const SpectralBasis& basis) {
  double s = 0;
  for (Eigen::Index i = 0; i < c.size(); ++i) s += basis.alphas[i] * c(i) * c(i);
  return std::sqrt(s);
}

double q_danorm(const Vec& c, const SpectralBasis& basis) {
  double s = 0;
  for (Eigen::Index i = 0; i < c.size(); ++i) s += basis.alphas[i] * basis.alphas[i] * c(i) * c(i);
  return std::sqrt(s);
}

double frak_q(const Vec& c0, const SpectralBasis& basis, const ExponentRecord& exps) {
  const double v = q_vnorm(c0, basis), d = q_danorm(c0, basis);
  return (1 + std::pow(v, 2 * (exps.frak_p + 1))) * (1 + std::pow(d, exps.max_z2_over));
}

McalSeries mcal_q(const Vec& c0, const ObliqueProjector& proj, const SemilinearModel& model, const FemOperators& ops,
                  FChoice f, double lambda, double r_frak, int nt) {
  if (!(r_frak > 1)) throw InvalidArgument("mcal_q: r must exceed 1");
  if (nt < 3) throw InvalidArgument("mcal_q: need at least 3 lattice points");
  McalSeries out;
  const Vec D = f_diagonal(proj.basis(), f, lambda);
  if (c0.norm() == 0) {
    out.t = {0.0};
    out.norm = {0.0};
    return out;
  }
  // integrand decays at least like exp(-2 r min(D) t)
  const double Th = std::log(1e12) / (2 * r_frak * D.minCoeff());
  TridiagSolver msolve(ops.mass);
  const double p = 2 * r_frak;
  double acc = 0, prev = 0;
  for (int i = 0; i < nt; ++i) {
    const double t = Th * i / (nt - 1);
    const Vec c = q_closed_form(c0, D, t);
    const Vec q = proj.from_eigen_coeffs(c);
    Vec h = linear_operator(model, ops, t).apply(q);
    msolve.solve_in_place(h);
    if (!model.linear()) h += eval_nonlinearity(model, t, q, ops);
    h -= proj.from_eigen_coeffs(D.cwiseProduct(c));
    const Vec mq = -(h - proj.apply_PU(h));
    const double nm = h_norm(mq, ops);
    const double val = std::pow(nm, p);
    if (i > 0) acc += 0.5 * (t - out.t.back()) * (prev + val);
    prev = val;
    out.t.push_back(t);
    out.norm.push_back(nm);
  }
  out.L2r_norm = std::pow(acc, 1.0 / p);
  out.h_base = out.L2r_norm * out.L2r_norm;
  return out;
}

FrakValues frak_values(const FrakInputs& in, double g1, double g2, double g3) {
  FrakValues v{};
  v.a0 = 2 - g1 - g2 - g3;
  v.a1 = in.proj_norm * in.proj_norm * in.C_rc * in.C_rc / g1;
  v.a2 = std::pow(g3, -2.0 / (1 - in.exps.max_z2d2)) * in.C_NN2;
  v.p = in.exps.frak_p;
  v.h_Lr = in.h_base / g2;
  return v;
}

double suffalpha_objective(const FrakInputs& in, double g1, double g2, double g3, double eps_bar) {
  const FrakValues v = frak_values(in, g1, g2, g3);
  if (!(v.a0 > 0) || !(eps_bar > 0)) return std::numeric_limits<double>::infinity();
  const double r = in.r_frak;
  const double pref = std::pow(r / (r - 1) * eps_bar, -(r - 1) / r);
  const double base = in.Q0_vnorm * in.Q0_vnorm + pref * v.h_Lr;
  const double aq = v.a2 * in.frak_q;
  const double num = v.a1 + aq + eps_bar + (v.p + 1) * aq * std::pow(base, v.p);
  return num / v.a0;
}

namespace {

// golden section on [lo, hi] for a unimodal f
template <class F>
double golden_min(F f, double lo, double hi, double& best_x, int iters = 120) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1);
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && (b - a) > 1e-13 * (1 + std::abs(a) + std::abs(b)); ++i) {
    if (fc < fd) {
      b = d, d = c, fd = fc;
      c = b - gr * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + gr * (b - a), fd = f(d);
    }
  }
  best_x = fc < fd ? c : d;
  return std::min(fc, fd);
}

}  // namespace

StabilityReport check_suffalpha(const FrakInputs& in, const SearchOptions& opt) {
  if (!(in.r_frak > 1)) throw InvalidArgument("check_suffalpha: r must exceed 1");
  if (in.exps.max_z2d2 >= 1) throw InvalidArgument("check_suffalpha: ||zeta2+delta2|| must be below 1");
  StabilityReport rep;
  rep.inf_J = std::numeric_limits<double>::infinity();
  // search in log coordinates x = (log g1, log g2, log g3, log eps_bar)
  std::array<double, 4> best{};
  auto J = [&](const std::array<double, 4>& x) {
    return suffalpha_objective(in, std::exp(x[0]), std::exp(x[1]), std::exp(x[2]), std::exp(x[3]));
  };
  const double glo = std::log(1e-3), ghi = std::log(1.5);
  const double elo = std::log(opt.eps_min), ehi = std::log(opt.eps_max);
  for (int i = 0; i < opt.gamma_grid; ++i)
    for (int j = 0; j < opt.gamma_grid; ++j)
      for (int l = 0; l < opt.gamma_grid; ++l)
        for (int e = 0; e < opt.eps_grid; ++e) {
          const double s = 1.0 / std::max(1, opt.gamma_grid - 1);
          std::array<double, 4> x{glo + (ghi - glo) * i * s, glo + (ghi - glo) * j * s, glo + (ghi - glo) * l * s,
                                  elo + (ehi - elo) * e / std::max(1, opt.eps_grid - 1)};
          const double v = J(x);
          if (v < rep.inf_J) rep.inf_J = v, best = x;
        }
  if (!std::isfinite(rep.inf_J)) {
    rep.diagnostics = "no feasible starting point with a0 > 0";
    return rep;
  }
  const double lg_min = std::log(opt.gamma_min);
  for (int round = 0; round < opt.rounds; ++round) {
    for (int c = 0; c < 4; ++c) {
      double lo, hi;
      if (c < 3) {
        double others = 0;
        for (int o = 0; o < 3; ++o)
          if (o != c) others += std::exp(best[o]);
        const double room = 2 - others;
        if (!(room > opt.gamma_min)) continue;
        lo = lg_min;
        hi = std::log(room * (1 - 1e-12));
      } else {
        lo = elo, hi = ehi;
      }
      auto x = best;
      double xc;
      const double v = golden_min(
          [&](double z) {
            x[c] = z;
            return J(x);
          },
          lo, hi, xc);
      if (v < rep.inf_J) {
        rep.inf_J = v;
        best[c] = xc;
      }
    }
  }
  rep.gamma = {std::exp(best[0]), std::exp(best[1]), std::exp(best[2])};
  rep.eps_bar = std::exp(best[3]);
  rep.satisfied = rep.inf_J < in.alpha_Mplus;

  const FrakValues v = frak_values(in, rep.gamma[0], rep.gamma[1], rep.gamma[2]);
  const double aq = v.a2 * in.frak_q;
  const double r = in.r_frak;
  const double pref = std::pow(r / (r - 1) * rep.eps_bar, -(r - 1) / r);
  const double Q2 = in.Q0_vnorm * in.Q0_vnorm;
  rep.eps = v.a0 * in.alpha_Mplus - v.a1 - aq - aq * std::pow(Q2, v.p);
  rep.eps_tilde = v.a0 * in.alpha_Mplus - v.a1 - aq - aq * (v.p + 1) * std::pow(Q2 + pref * v.h_Lr, v.p);
  rep.linear_margin = linear_margin(in.alpha_Mplus, in.proj_norm, in.C_rc);
  std::ostringstream os;
  os << "inf J = " << rep.inf_J << (rep.satisfied ? " < " : " >= ") << "alpha_M+ = " << in.alpha_Mplus;
  rep.diagnostics = os.str();
  return rep;
}

DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& v, double tail_fraction) {
  if (t.size() != v.size() || t.size() < 2) throw InvalidArgument("decay_fit: need at least two samples");
  if (!(tail_fraction > 0 && tail_fraction <= 1)) throw InvalidArgument("decay_fit: tail fraction must lie in (0,1]");
  if (!(v[0] > 0)) throw InvalidArgument("decay_fit: initial norm must be positive");
  std::size_t n = t.size();
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!(v[i] >= 1e-14) || !std::isfinite(v[i])) {
      n = i;
      break;
    }
  if (n < 2) throw InvalidArgument("decay_fit: fewer than two usable samples");
  std::size_t start = n - std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(tail_fraction * n)));
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double cnt = static_cast<double>(n - start);
  for (std::size_t i = start; i < n; ++i) {
    const double ly = std::log(v[i]);
    st += t[i], sy += ly, stt += t[i] * t[i], sty += t[i] * ly;
  }
  const double slope = (cnt * sty - st * sy) / (cnt * stt - st * st);
  DecayFit fit{0, -slope, n - start};
  for (std::size_t i = 0; i < n; ++i) fit.C_fit = std::max(fit.C_fit, v[i] * std::exp(fit.mu_fit * t[i]) / v[0]);
  return fit;
}

DecayFit decay_fit(const Trajectory& tr, double tail_fraction) {
  if (tr.outcome != Outcome::Completed) throw InvalidArgument("decay_fit: trajectory did not complete");
  return decay_fit(tr.times, tr.norm_V, tail_fraction);
}

DecouplingResidual q_decoupling_residual(const Trajectory& tr, const ObliqueProjector& proj, const FeedbackConfig& fb) {
  if (tr.snapshots.empty()) throw InvalidArgument("q_decoupling_residual: trajectory has no snapshots");
  DecouplingResidual out{0.0, fb.ktype != KType::Off};
  Vec D;
  if (fb.ktype == KType::Off) {
    D.resize(proj.m());
    for (int i = 0; i < proj.m(); ++i) D(i) = proj.basis().alphas[i];
  } else {
    D = f_diagonal(proj.basis(), fb.f_choice, fb.lambda);
  }
  const double t0 = tr.snapshot_times.front();
  const Vec c0 = proj.eigen_coeffs(tr.snapshots.front());
  for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
    const Vec c = proj.eigen_coeffs(tr.snapshots[i]);
    out.residual = std::max(out.residual, (c - q_closed_form(c0, D, tr.snapshot_times[i] - t0)).norm());
  }
  return out;
}

double hnorm_bound_eval(const HnormBoundParams& p, double q0_vnorm, double alpha_M) {
  return p.C_bar * (1 + std::pow(alpha_M, p.beta2) + std::pow(alpha_M, p.r_frak * p.eta2 * p.z2d2)) * q0_vnorm * q0_vnorm;
}

double q_subsystem_bound_ratio(const Trajectory& tr, const ObliqueProjector& proj, const FemOperators& ops, double nu,
                               const McalSeries& mcal, double gamma2, double eps, double eps_tilde) {
  if (tr.snapshots.empty()) throw InvalidArgument("q_subsystem_bound_ratio: no snapshots");
  auto hval = [&](double s) {
    if (mcal.t.size() < 2 || s > mcal.t.back()) return 0.0;
    const auto it = std::upper_bound(mcal.t.begin(), mcal.t.end(), s);
    const std::size_t hi = std::min<std::size_t>(it - mcal.t.begin(), mcal.t.size() - 1), lo = hi - 1;
    const double w = (s - mcal.t[lo]) / (mcal.t[hi] - mcal.t[lo]);
    const double n = (1 - w) * mcal.norm[lo] + w * mcal.norm[hi];
    return n * n / gamma2;
  };
  const Vec Q0 = tr.snapshots.front() - proj.apply_PE(tr.snapshots.front());
  const double Q0v2 = std::pow(v_norm(Q0, ops, nu), 2);
  const double t0 = tr.snapshot_times.front();
  double worst = 0;
  for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
    const double t = tr.snapshot_times[i] - t0;
    const Vec Q = tr.snapshots[i] - proj.apply_PE(tr.snapshots[i]);
    const double lhs = std::pow(v_norm(Q, ops, nu), 2);
    const int n = 2000;
    double integral = 0;
    for (int j = 0; j < n; ++j) {
      const double s0 = t * j / n, s1 = t * (j + 1) / n;
      integral += 0.5 * (s1 - s0) *
                  (std::exp(-eps_tilde * (t - s0)) * hval(s0) + std::exp(-eps_tilde * (t - s1)) * hval(s1));
    }
    const double rhs = std::exp(-eps * t) * Q0v2 + integral;
    if (rhs > 0) worst = std::max(worst, lhs / rhs);
    else if (lhs > 0) worst = std::numeric_limits<double>::infinity();
  }
  return worst;
}

}  // namespace parastab

namespace parastab {

int minimal_passing_M(const std::function<FrakInputs(int)>& inputs_for_M, int M_max, const SearchOptions& opt) {
  auto pass = [&](int M) { return check_suffalpha(inputs_for_M(M), opt).satisfied; };
  if (M_max < 1) throw InvalidArgument("minimal_passing_M: M_max must be positive");
  int hi = 1;
  while (hi < M_max && !pass(hi)) hi = std::min(M_max, hi * 2);
  if (!pass(hi)) return 0;
  int lo = hi / 2;  // fails (or 0)
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (pass(mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

}  // namespace parastab
