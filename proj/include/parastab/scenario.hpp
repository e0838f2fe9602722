#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "parastab/analysis.hpp"
#include "parastab/feedback.hpp"
#include "parastab/stepper.hpp"

namespace parastab {

struct Scenario {
  std::string name = "run";
  // model
  std::string coefficients = "benchmark";  // "benchmark" or "heat" (a = 1, b = 0)
  double c_N = 1;
  double c_ic = 2;
  std::string profile = "sin2";  // "sin2" or "sin8"
  double C_rc = -1;              // < 0: empirical surrogate from the coefficients
  // feedback
  KType ktype = KType::Off;
  FChoice f_choice = FChoice::APlusLambdaId;
  double lambda = 1;
  std::vector<std::pair<double, double>> feed_on;
  int M = 6;
  double r = 0.1;
  // simulation
  int N = 1000;
  double k = 5e-4;
  double T = 5;
  double blowup_threshold = 1e8;
  std::string treatment = "implicit";
  // analysis
  bool run_suffalpha = false;
  bool run_decay_fit = true;
  bool run_q_residual = false;
  double tail_fraction = 0.5;
  double r_frak = 2;
  double C_NN2 = 1;
  double snapshot_every = 0.1;
  std::string output_dir;

  void validate() const;
};

nlohmann::json to_json(const Scenario& s);
// Strict: unknown keys or wrong types raise ParseError naming the key.
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);
bool operator==(const Scenario& a, const Scenario& b);

std::vector<std::string> list_presets();
Scenario preset(const std::string& name);

struct RunRecord {
  Scenario scenario;
  Outcome outcome = Outcome::Completed;
  double blowup_time = 0;
  std::string csv_path, json_path, svg_path;
  double control_energy = 0;
  double initial_norm_V = 0, final_norm_V = 0;
  bool stabilized = false;
  std::optional<double> proj_norm;
  std::optional<double> theta_condition;
  std::optional<StabilityReport> stability;
  double wall_clock = 0;
  int schema_version = 1;
  Trajectory trajectory;  // not serialised
};

nlohmann::json to_json(const RunRecord& r);

// Completed, fitted decay rate positive and final V-norm below 10% of the initial one.
bool is_stabilized(const Trajectory& tr);

std::string default_output_root();

struct RunOptions {
  bool write_files = true;
  bool keep_trajectory = false;
};

RunRecord run(const Scenario& s, const std::string& out_root = default_output_root(), const RunOptions& opt = {});

struct SweepRow {
  int M;
  Outcome outcome;
  double mu_fit;  // NaN when no fit is possible
  bool stabilized;
  double final_ratio;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::optional<int> minimal_stabilizing_M;
};

SweepResult sweep_M(const Scenario& tmpl, const std::vector<int>& Ms, int workers = 1,
                    const std::string& out_root = default_output_root(), bool write_files = true);

void write_norm_csv(const Trajectory& tr, const std::string& path);

struct PlotOptions {
  std::string column = "norm_V";
  std::string title;
  std::optional<double> blowup_time;  // detected from a sibling run.json when absent
};

std::string emit_plot(const std::string& csv_path, const std::string& svg_path = "", PlotOptions opt = {});

}  // namespace parastab
