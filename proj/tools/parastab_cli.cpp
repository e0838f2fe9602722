// parastab: run the interval experiments, sweep the actuator count, list presets, plot norm series.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "parastab/errors.hpp"
#include "parastab/scenario.hpp"

using namespace parastab;

namespace {

struct Overrides {
  std::string config, preset_name, out;
  std::optional<int> M, N;
  std::optional<std::string> ktype, fchoice;
  std::optional<double> cic, cN, k, T;
};

void add_scenario_flags(CLI::App* cmd, Overrides& o, bool with_M) {
  cmd->add_option("--config", o.config, "scenario JSON file");
  cmd->add_option("--preset", o.preset_name, "named preset (see `presets`)");
  cmd->add_option("--out", o.out, "output root (default $PARASTAB_OUT or ./parastab_out)");
  if (with_M) cmd->add_option("--M", o.M, "number of actuators");
  cmd->add_option("--ktype", o.ktype, "off | klinz | knonl");
  cmd->add_option("--fchoice", o.fchoice, "lambda | AplusLambda");
  cmd->add_option("--cic", o.cic, "initial condition amplitude");
  cmd->add_option("--cN", o.cN, "nonlinearity coefficient");
  cmd->add_option("--N", o.N, "number of grid elements");
  cmd->add_option("--k", o.k, "time step");
  cmd->add_option("--T", o.T, "final time");
}

Scenario resolve(const Overrides& o) {
  if (!o.config.empty() && !o.preset_name.empty()) throw InvalidArgument("--config and --preset are exclusive");
  Scenario s;
  if (!o.config.empty()) s = load_scenario(o.config);
  else if (!o.preset_name.empty()) s = preset(o.preset_name);
  if (o.M) s.M = *o.M;
  if (o.N) s.N = *o.N;
  if (o.ktype) s.ktype = ktype_from_string(*o.ktype);
  if (o.fchoice) s.f_choice = fchoice_from_string(*o.fchoice);
  if (o.cic) s.c_ic = *o.cic;
  if (o.cN) s.c_N = *o.cN;
  if (o.k) s.k = *o.k;
  if (o.T) s.T = *o.T;
  s.validate();
  return s;
}

std::string root_of(const Overrides& o) { return o.out.empty() ? default_output_root() : o.out; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oblique-projection feedback experiments for semilinear parabolic equations"};
  app.require_subcommand(1);

  Overrides run_o;
  bool suffalpha = false, qres = false;
  auto* run_cmd = app.add_subcommand("run", "simulate one scenario");
  add_scenario_flags(run_cmd, run_o, true);
  run_cmd->add_flag("--suffalpha", suffalpha, "also evaluate the sufficient stability condition");
  run_cmd->add_flag("--q-residual", qres, "also measure the q-decoupling residual");

  Overrides sw_o;
  std::string Ms_text = "1:12";
  int workers = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a scenario over a range of actuator counts");
  add_scenario_flags(sweep_cmd, sw_o, false);
  sweep_cmd->add_option("--Ms", Ms_text, "ascending list 'a,b,c' or range 'lo:hi'");
  sweep_cmd->add_option("--workers", workers, "parallel runs")->check(CLI::PositiveNumber);

  app.add_subcommand("presets", "list preset names");

  std::string csv, svg, column = "norm_V";
  auto* plot_cmd = app.add_subcommand("plot", "render a norm-series CSV as SVG");
  plot_cmd->add_option("csv", csv, "norms.csv")->required();
  plot_cmd->add_option("--svg", svg, "output path (default: next to the CSV)");
  plot_cmd->add_option("--column", column, "norm_H | norm_V | control_H_norm");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("presets")) {
      for (const auto& n : list_presets()) std::cout << n << "\n";
    } else if (app.got_subcommand("plot")) {
      PlotOptions po;
      po.column = column;
      std::cout << emit_plot(csv, svg, po) << "\n";
    } else if (app.got_subcommand("run")) {
      Scenario s = resolve(run_o);
      s.run_suffalpha = s.run_suffalpha || suffalpha;
      s.run_q_residual = s.run_q_residual || qres;
      const RunRecord r = run(s, root_of(run_o));
      std::cout << to_json(r).dump(2) << "\n";
    } else if (app.got_subcommand("sweep")) {
      const Scenario s = resolve(sw_o);
      std::vector<int> Ms;
      if (auto c = Ms_text.find(':'); c != std::string::npos) {
        const int lo = std::stoi(Ms_text.substr(0, c)), hi = std::stoi(Ms_text.substr(c + 1));
        for (int m = lo; m <= hi; ++m) Ms.push_back(m);
      } else {
        std::size_t pos = 0;
        while (pos < Ms_text.size()) {
          const auto e = Ms_text.find(',', pos);
          Ms.push_back(std::stoi(Ms_text.substr(pos, e - pos)));
          if (e == std::string::npos) break;
          pos = e + 1;
        }
      }
      const SweepResult res = sweep_M(s, Ms, workers, root_of(sw_o));
      std::printf("%4s  %-9s  %12s  %12s  %s\n", "M", "outcome", "mu_fit", "final/init", "stabilized");
      for (const auto& row : res.rows)
        std::printf("%4d  %-9s  %12.5g  %12.5g  %s\n", row.M, to_string(row.outcome), row.mu_fit, row.final_ratio,
                    row.stabilized ? "yes" : "no");
      if (res.minimal_stabilizing_M) std::printf("minimal stabilizing M: %d\n", *res.minimal_stabilizing_M);
      else std::printf("minimal stabilizing M: none\n");
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
