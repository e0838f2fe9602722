#pragma once

#include <string>
#include <utility>
#include <vector>

#include "parastab/model.hpp"
#include "parastab/projection.hpp"

namespace parastab {

enum class KType { Off, LinearizationBased, Nonlinear };
enum class FChoice { LambdaId, APlusLambdaId };

const char* to_string(KType k);
const char* to_string(FChoice f);
KType ktype_from_string(const std::string& s);
FChoice fchoice_from_string(const std::string& s);

struct FeedbackConfig {
  KType ktype = KType::Off;
  FChoice f_choice = FChoice::APlusLambdaId;
  double lambda = 1.0;
  // half-open intervals [t0, t1); empty means always on
  std::vector<std::pair<double, double>> feed_on;

  void validate() const;
  bool active(double t) const;
};

// Diagonal of F on E in eigen coordinates.
Vec f_diagonal(const SpectralBasis& basis, FChoice f, double lambda);
Vec apply_F(const SpectralBasis& basis, FChoice f, double lambda, const Vec& q);

struct FeedbackForce {
  Vec force;  // H-representative Phi u
  Vec u;      // actuator coefficients
};

// P_U(A y + A_rc y [+ N(y)] - F(P_E y)), realised as
// u = Theta^{-1}(E^T K_h y [+ g^T n] - G D c),  c = G^{-1} g^T y.
// When nonlin is given it is used as the nodal value of N(t, y).
FeedbackForce feedback_force(const FeedbackConfig& cfg, const ObliqueProjector* proj, const SemilinearModel& model,
                             const FemOperators& ops, double t, const Vec& y, const Vec* nonlin = nullptr);

struct ControlRecord {
  std::vector<double> times;
  std::vector<Vec> u;            // may be empty when coefficients are not stored
  std::vector<double> h_norms;   // ||Phi u(t)||_H
};

// (int_0^T ||u||_H^{2r} dt)^{1/(2r)} by the trapezoid rule.
double control_energy(const ControlRecord& rec, double r_exp);
std::vector<double> cumulative_control_energy(const ControlRecord& rec, double r_exp);

}  // namespace parastab
