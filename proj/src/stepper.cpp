#include "parastab/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parastab/errors.hpp"

namespace parastab {

const char* to_string(Outcome o) { return o == Outcome::Completed ? "Completed" : "BlowUp"; }

void SimConfig::validate() const {
  if (!(k > 0)) throw InvalidArgument("timestep k must be positive");
  if (!(T > 0)) throw InvalidArgument("final time T must be positive");
  if (N < 16) throw InvalidArgument("N must be at least 16");
  if (!(blowup_threshold > 0)) throw InvalidArgument("blow-up threshold must be positive");
}

long long SimConfig::steps() const { return static_cast<long long>(std::floor(T / k + 1e-9)); }

namespace {

struct Recorder {
  Trajectory& tr;
  const FemOperators& ops;
  double nu;
  const SimConfig& cfg;
  std::size_t next_snap = 0;
  std::vector<double> snaps;

  void push(double t, const Vec& y, const FeedbackForce& f, bool have_control) {
    tr.times.push_back(t);
    tr.norm_H.push_back(h_norm(y, ops));
    tr.norm_V.push_back(v_norm(y, ops, nu));
    tr.controls.times.push_back(t);
    tr.controls.h_norms.push_back(have_control ? h_norm(f.force, ops) : 0.0);
    if (cfg.store_controls) tr.controls.u.push_back(f.u);
  }

  void maybe_snapshot(double t, double k, const Vec& y) {
    while (next_snap < snaps.size() && snaps[next_snap] <= t + 0.5 * k) {
      if (snaps[next_snap] > t - 0.5 * k) {
        tr.snapshot_times.push_back(t);
        tr.snapshots.push_back(y);
      }
      ++next_snap;
    }
  }
};

}  // namespace

Trajectory simulate(const SemilinearModel& model, const FeedbackConfig& fb, const ObliqueProjector* proj,
                    const FemOperators& ops, const Vec& y0, const SimConfig& cfg) {
  cfg.validate();
  fb.validate();
  if (y0.size() != ops.ndof) throw InvalidArgument("simulate: initial state does not match the grid");
  if (fb.ktype != KType::Off && proj == nullptr) throw InvalidArgument("simulate: feedback requires a projector");
  if (proj && proj->g().rows() != ops.ndof) throw InvalidArgument("simulate: projector built on another grid");

  const double k = cfg.k;
  const long long nsteps = cfg.steps();
  const bool nonlinear = !model.linear();
  const bool knonl = fb.ktype == KType::Nonlinear && nonlinear;
  const int m = proj ? proj->m() : 0;

  Trajectory tr;
  Recorder rec{tr, ops, model.domain.nu, cfg, 0, cfg.snapshot_times};
  std::sort(rec.snaps.begin(), rec.snaps.end());

  // constant pieces of the low-rank update: W = (M Phi) Theta^{-1}, B = G D G^{-1}
  Mat W, B;
  if (proj && m > 0) {
    Mat MPhi(ops.ndof, m);
    for (int j = 0; j < m; ++j) MPhi.col(j) = ops.mass.apply(proj->Phi().col(j));
    W = proj->theta().transpose().partialPivLu().solve(MPhi.transpose()).transpose();
    const Vec d = f_diagonal(proj->basis(), fb.f_choice, fb.lambda);
    B = proj->gram() * d.asDiagonal() * proj->gram().partialPivLu().solve(Mat::Identity(m, m));
  }

  Vec y = y0;
  double t = 0.0;
  auto feedback_at = [&](double tt, const Vec& yy, const Vec* n) {
    return feedback_force(fb, proj, model, ops, tt, yy, n);
  };

  Vec n = nonlinear ? eval_nonlinearity(model, t, y, ops) : Vec::Zero(ops.ndof);
  FeedbackForce f = feedback_at(t, y, &n);
  rec.push(t, y, f, fb.active(t));
  rec.maybe_snapshot(t, k, y);

  for (long long j = 0; j < nsteps; ++j) {
    const double tm = t + 0.5 * k;
    const Tridiag K = linear_operator(model, ops, tm);
    Tridiag lhs = ops.mass;
    lhs += 0.5 * k * K;
    Vec rhs = ops.mass.apply(y) - 0.5 * k * K.apply(y);
    if (nonlinear) rhs -= k * ops.mass.apply(n);
    const bool on = fb.active(tm) && m > 0;
    TridiagSolver solver(lhs);

    if (on && cfg.treatment == FeedbackTreatment::Explicit) {
      rhs += k * ops.mass.apply(f.force);
      solver.solve_in_place(rhs);
      y = rhs;
    } else if (on) {
      // C = K + W Z^T with Z^T = -E^T K + G D G^{-1} g^T
      const Mat& E = proj->E();
      const Mat& g = proj->g();
      Mat KtE(ops.ndof, m);
      for (int i = 0; i < m; ++i) KtE.col(i) = K.apply_transpose(E.col(i));
      auto Zt = [&](const Vec& v) -> Vec { return -KtE.transpose() * v + B * (g.transpose() * v); };

      rhs -= 0.5 * k * (W * Zt(y));
      if (knonl) rhs += k * (W * (g.transpose() * n));

      Mat TW = W;
      for (int i = 0; i < m; ++i) {
        Vec c = TW.col(i);
        solver.solve_in_place(c);
        TW.col(i) = c;
      }
      solver.solve_in_place(rhs);
      Mat ZtTW = -KtE.transpose() * TW + B * (g.transpose() * TW);
      Mat cap = (2.0 / k) * Mat::Identity(m, m) + ZtTW;
      Vec corr = cap.partialPivLu().solve(Zt(rhs));
      y = rhs - TW * corr;
    } else {
      solver.solve_in_place(rhs);
      y = rhs;
    }
    t = (j + 1) * k;

    const double nh = h_norm(y, ops);
    const bool finite = std::isfinite(nh) && y.allFinite();
    if (finite && nonlinear) n = eval_nonlinearity(model, t, y, ops);
    const bool n_ok = !nonlinear || n.allFinite();
    if (!finite || !n_ok || (nh >= cfg.blowup_threshold && (nonlinear || cfg.threshold_for_linear))) {
      FeedbackForce zero{Vec::Zero(ops.ndof), Vec::Zero(m)};
      rec.push(t, y, zero, false);
      if (!std::isfinite(tr.norm_H.back())) tr.norm_H.back() = std::numeric_limits<double>::infinity();
      if (!std::isfinite(tr.norm_V.back())) tr.norm_V.back() = std::numeric_limits<double>::infinity();
      tr.outcome = Outcome::BlowUp;
      tr.blowup_time = t;
      return tr;
    }
    f = feedback_at(t, y, &n);
    rec.push(t, y, f, fb.active(t));
    rec.maybe_snapshot(t, k, y);
  }
  tr.outcome = Outcome::Completed;
  return tr;
}

std::vector<NormRow> norm_series(const Trajectory& tr) {
  std::vector<NormRow> rows;
  rows.reserve(tr.times.size());
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    rows.push_back({tr.times[i], tr.norm_H[i], tr.norm_V[i], tr.controls.h_norms[i]});
  return rows;
}

Vec snapshot(const Trajectory& tr, double t) {
  const auto& ts = tr.snapshot_times;
  if (ts.empty()) throw InvalidArgument("snapshot: no states stored");
  const double eps = 1e-12 * std::max(1.0, std::abs(t));
  if (t < ts.front() - eps || t > ts.back() + eps) throw InvalidArgument("snapshot: time outside stored range");
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (std::abs(ts[i] - t) <= eps) return tr.snapshots[i];
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - ts.begin()), lo = hi - 1;
  const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
  return (1 - w) * tr.snapshots[lo] + w * tr.snapshots[hi];
}

}  // namespace parastab
