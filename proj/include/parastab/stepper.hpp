#pragma once

#include <string>
#include <vector>

#include "parastab/feedback.hpp"
#include "parastab/model.hpp"
#include "parastab/projection.hpp"

namespace parastab {

enum class Outcome { Completed, BlowUp };
const char* to_string(Outcome o);

// How the rank-M feedback enters the Crank-Nicolson step.
//  Implicit: the linear part of the closed loop is averaged like A, solved with a
//            tridiagonal-plus-low-rank (Woodbury) system.
//  Explicit: the feedback is frozen at t_j.
enum class FeedbackTreatment { Implicit, Explicit };

struct SimConfig {
  int N = 1000;
  double k = 5e-4;
  double T = 5.0;
  double c_ic = 1.0;
  std::string profile = "sin2";
  double blowup_threshold = 1e8;
  // The threshold only flags blow-up of nonlinear models; linear runs may grow
  // exponentially and still complete. Non-finite states end any run.
  bool threshold_for_linear = false;
  FeedbackTreatment treatment = FeedbackTreatment::Implicit;
  std::vector<double> snapshot_times;
  bool store_controls = false;

  void validate() const;
  long long steps() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> norm_H;
  std::vector<double> norm_V;
  ControlRecord controls;
  std::vector<double> snapshot_times;
  std::vector<Vec> snapshots;
  Outcome outcome = Outcome::Completed;
  double blowup_time = 0.0;
};

Trajectory simulate(const SemilinearModel& model, const FeedbackConfig& fb, const ObliqueProjector* proj,
                    const FemOperators& ops, const Vec& y0, const SimConfig& cfg);

struct NormRow {
  double t, norm_H, norm_V, control_H;
};
std::vector<NormRow> norm_series(const Trajectory& tr);

// Linear interpolation between stored snapshots; throws if t lies outside them.
Vec snapshot(const Trajectory& tr, double t);

}  // namespace parastab
