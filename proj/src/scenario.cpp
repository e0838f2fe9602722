#include "parastab/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "parastab/actuators.hpp"
#include "parastab/errors.hpp"

namespace parastab {

namespace fs = std::filesystem;
using nlohmann::json;

void Scenario::validate() const {
  if (name.empty()) throw InvalidArgument("scenario name must not be empty");
  if (coefficients != "benchmark" && coefficients != "heat")
    throw InvalidArgument("model.coefficients must be 'benchmark' or 'heat'");
  if (profile != "sin2" && profile != "sin8") throw InvalidArgument("model.profile must be 'sin2' or 'sin8'");
  if (ktype != KType::Off && M < 1) throw InvalidArgument("feedback.M must be positive");
  if (!(r > 0 && r < 1)) throw InvalidArgument("feedback.r must lie in (0,1)");
  if (!(lambda > 0)) throw InvalidArgument("feedback.lambda must be positive");
  if (treatment != "implicit" && treatment != "explicit")
    throw InvalidArgument("sim.treatment must be 'implicit' or 'explicit'");
  if (!(tail_fraction > 0 && tail_fraction <= 1)) throw InvalidArgument("analysis.tail_fraction must lie in (0,1]");
  if (!(r_frak > 1)) throw InvalidArgument("analysis.r_frak must exceed 1");
  SimConfig sc;
  sc.N = N, sc.k = k, sc.T = T, sc.blowup_threshold = blowup_threshold;
  sc.validate();
}

json to_json(const Scenario& s) {
  json feed = json::array();
  for (const auto& [a, b] : s.feed_on) feed.push_back({a, b});
  return {
      {"name", s.name},
      {"model", {{"coefficients", s.coefficients}, {"c_N", s.c_N}, {"c_ic", s.c_ic}, {"profile", s.profile}, {"C_rc", s.C_rc}}},
      {"feedback",
       {{"ktype", to_string(s.ktype)}, {"f_choice", to_string(s.f_choice)}, {"lambda", s.lambda}, {"feed_on", feed},
        {"M", s.M}, {"r", s.r}}},
      {"sim",
       {{"N", s.N}, {"k", s.k}, {"T", s.T}, {"blowup_threshold", s.blowup_threshold}, {"treatment", s.treatment}}},
      {"analysis",
       {{"suffalpha", s.run_suffalpha}, {"decay_fit", s.run_decay_fit}, {"q_residual", s.run_q_residual},
        {"tail_fraction", s.tail_fraction}, {"r_frak", s.r_frak}, {"C_NN2", s.C_NN2}, {"snapshot_every", s.snapshot_every}}},
      {"output_dir", s.output_dir},
  };
}

namespace {

template <class T>
T get_as(const json& v, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ParseError("key '" + key + "' must be a number", key);
    } else if constexpr (std::is_same_v<T, int>) {
      if (!v.is_number_integer()) throw ParseError("key '" + key + "' must be an integer", key);
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ParseError("key '" + key + "' must be a boolean", key);
    } else {
      if (!v.is_string()) throw ParseError("key '" + key + "' must be a string", key);
    }
    return v.get<T>();
  } catch (const json::exception& e) {
    throw ParseError("key '" + key + "': " + e.what(), key);
  }
}

using Setter = std::function<void(Scenario&, const json&, const std::string&)>;

template <class T, class F>
Setter field(F f) {
  return [f](Scenario& s, const json& v, const std::string& key) { f(s, get_as<T>(v, key)); };
}

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> m = {
      {"model",
       {{"coefficients", field<std::string>([](Scenario& s, std::string v) { s.coefficients = v; })},
        {"c_N", field<double>([](Scenario& s, double v) { s.c_N = v; })},
        {"c_ic", field<double>([](Scenario& s, double v) { s.c_ic = v; })},
        {"profile", field<std::string>([](Scenario& s, std::string v) { s.profile = v; })},
        {"C_rc", field<double>([](Scenario& s, double v) { s.C_rc = v; })}}},
      {"feedback",
       {{"ktype",
         [](Scenario& s, const json& v, const std::string& key) {
           try {
             s.ktype = ktype_from_string(get_as<std::string>(v, key));
           } catch (const InvalidArgument& e) {
             throw ParseError("key '" + key + "': " + e.what(), key);
           }
         }},
        {"f_choice",
         [](Scenario& s, const json& v, const std::string& key) {
           try {
             s.f_choice = fchoice_from_string(get_as<std::string>(v, key));
           } catch (const InvalidArgument& e) {
             throw ParseError("key '" + key + "': " + e.what(), key);
           }
         }},
        {"lambda", field<double>([](Scenario& s, double v) { s.lambda = v; })},
        {"feed_on",
         [](Scenario& s, const json& v, const std::string& key) {
           if (!v.is_array()) throw ParseError("key '" + key + "' must be an array of [t0, t1] pairs", key);
           s.feed_on.clear();
           for (const auto& iv : v) {
             if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
               throw ParseError("key '" + key + "' must be an array of [t0, t1] pairs", key);
             s.feed_on.emplace_back(iv[0].get<double>(), iv[1].get<double>());
           }
         }},
        {"M", field<int>([](Scenario& s, int v) { s.M = v; })},
        {"r", field<double>([](Scenario& s, double v) { s.r = v; })}}},
      {"sim",
       {{"N", field<int>([](Scenario& s, int v) { s.N = v; })},
        {"k", field<double>([](Scenario& s, double v) { s.k = v; })},
        {"T", field<double>([](Scenario& s, double v) { s.T = v; })},
        {"blowup_threshold", field<double>([](Scenario& s, double v) { s.blowup_threshold = v; })},
        {"treatment", field<std::string>([](Scenario& s, std::string v) { s.treatment = v; })}}},
      {"analysis",
       {{"suffalpha", field<bool>([](Scenario& s, bool v) { s.run_suffalpha = v; })},
        {"decay_fit", field<bool>([](Scenario& s, bool v) { s.run_decay_fit = v; })},
        {"q_residual", field<bool>([](Scenario& s, bool v) { s.run_q_residual = v; })},
        {"tail_fraction", field<double>([](Scenario& s, double v) { s.tail_fraction = v; })},
        {"r_frak", field<double>([](Scenario& s, double v) { s.r_frak = v; })},
        {"C_NN2", field<double>([](Scenario& s, double v) { s.C_NN2 = v; })},
        {"snapshot_every", field<double>([](Scenario& s, double v) { s.snapshot_every = v; })}}},
  };
  return m;
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("scenario must be a JSON object", "");
  Scenario s;
  for (const auto& [key, val] : j.items()) {
    if (key == "name") {
      s.name = get_as<std::string>(val, key);
    } else if (key == "output_dir") {
      s.output_dir = get_as<std::string>(val, key);
    } else if (key == "schema_version") {
      continue;
    } else if (auto it = schema().find(key); it != schema().end()) {
      if (!val.is_object()) throw ParseError("key '" + key + "' must be an object", key);
      for (const auto& [sub, sv] : val.items()) {
        const std::string path = key + "." + sub;
        auto f = it->second.find(sub);
        if (f == it->second.end()) throw ParseError("unknown key '" + path + "'", path);
        f->second(s, sv, path);
      }
    } else {
      throw ParseError("unknown key '" + key + "'", key);
    }
  }
  try {
    s.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("invalid scenario: ") + e.what(), "");
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what(), "");
  }
  return scenario_from_json(j);
}

bool operator==(const Scenario& a, const Scenario& b) { return to_json(a) == to_json(b); }

namespace {

Scenario base(const std::string& name, double c_N, double c_ic, KType kt, FChoice f, int M) {
  Scenario s;
  s.name = name;
  s.c_N = c_N;
  s.c_ic = c_ic;
  s.ktype = kt;
  s.f_choice = f;
  s.M = M;
  return s;
}

std::vector<Scenario> all_presets() {
  const auto L = FChoice::LambdaId, AL = FChoice::APlusLambdaId;
  const auto lin = KType::LinearizationBased, non = KType::Nonlinear;
  std::vector<Scenario> v;
  v.push_back(base("fig1-linear-uncontrolled", 0, 2, KType::Off, AL, 6));
  v.push_back(base("fig1-nonlinear-uncontrolled", 1, 2, KType::Off, AL, 6));
  v.push_back(base("fig2-klinz-lambda-M6", 0, 2, lin, L, 6));
  v.push_back(base("fig2-klinz-AplusLambda-M6", 0, 2, lin, AL, 6));
  v.push_back(base("fig3-klinz-lambda-M6", 1, 2, lin, L, 6));
  v.push_back(base("fig3-klinz-AplusLambda-M6", 1, 2, lin, AL, 6));
  v.push_back(base("fig4-knonl-AplusLambda-M6", 1, 2, non, AL, 6));
  v.push_back(base("fig4-knonl-lambda-M6", 1, 2, non, L, 6));
  v.push_back(base("fig4-knonl-lambda-M7", 1, 2, non, L, 7));
  v.push_back(base("fig5-knonl-AplusLambda-M7-cic4", 1, 4, non, AL, 7));
  v.push_back(base("fig5-knonl-lambda-M7-cic4", 1, 4, non, L, 7));
  for (int M : {8, 9}) {
    v.push_back(base("fig6-knonl-AplusLambda-M" + std::to_string(M) + "-cic4", 1, 4, non, AL, M));
    v.push_back(base("fig6-knonl-lambda-M" + std::to_string(M) + "-cic4", 1, 4, non, L, M));
  }
  for (int M : {10, 20, 40}) {
    v.push_back(base("fig7-klinz-lambda-M" + std::to_string(M) + "-cic4", 1, 4, lin, L, M));
    v.push_back(base("fig7-klinz-AplusLambda-M" + std::to_string(M) + "-cic4", 1, 4, lin, AL, M));
  }
  for (auto f : {L, AL}) {
    Scenario s = base(std::string("fig8-knonl-") + to_string(f) + "-M7-sin8", 1, 2, non, f, 7);
    s.profile = "sin8";
    v.push_back(s);
  }
  return v;
}

}  // namespace

std::vector<std::string> list_presets() {
  std::vector<std::string> names;
  for (const auto& s : all_presets()) names.push_back(s.name);
  return names;
}

Scenario preset(const std::string& name) {
  for (const auto& s : all_presets())
    if (s.name == name) return s;
  std::string msg = "unknown preset '" + name + "'; available:";
  for (const auto& n : list_presets()) msg += " " + n;
  throw InvalidArgument(msg);
}

std::string default_output_root() {
  if (const char* e = std::getenv("PARASTAB_OUT"); e && *e) return e;
  return "parastab_out";
}

bool is_stabilized(const Trajectory& tr) {
  if (tr.outcome != Outcome::Completed || tr.norm_V.size() < 2) return false;
  const double v0 = tr.norm_V.front(), v1 = tr.norm_V.back();
  if (!(v1 < 0.1 * v0)) return false;
  try {
    return decay_fit(tr, 0.5).mu_fit > 0;
  } catch (const InvalidArgument&) {
    return v1 < 1e-14;
  }
}

void write_norm_csv(const Trajectory& tr, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write " + path);
  std::fputs("t,norm_H,norm_V,control_H_norm\n", f);
  for (const auto& row : norm_series(tr))
    std::fprintf(f, "%.10g,%.12e,%.12e,%.12e\n", row.t, row.norm_H, row.norm_V, row.control_H);
  if (std::fclose(f) != 0) throw std::runtime_error("cannot write " + path);
}

json to_json(const RunRecord& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["scenario"] = to_json(r.scenario);
  j["outcome"] = to_string(r.outcome);
  if (r.outcome == Outcome::BlowUp) j["blowup_time"] = r.blowup_time;
  j["norm_series"] = r.csv_path;
  j["plot"] = r.svg_path;
  j["control_energy"] = r.control_energy;
  j["initial_norm_V"] = r.initial_norm_V;
  j["final_norm_V"] = r.final_norm_V;
  j["stabilized"] = r.stabilized;
  if (r.proj_norm) j["projection_norm"] = *r.proj_norm;
  if (r.theta_condition) j["theta_condition"] = *r.theta_condition;
  if (r.stability) {
    const auto& s = *r.stability;
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    j["stability"] = {{"linear_margin", num(s.linear_margin)},
                      {"suffalpha_satisfied", s.satisfied},
                      {"gamma", {s.gamma[0], s.gamma[1], s.gamma[2]}},
                      {"eps_bar", num(s.eps_bar)},
                      {"inf_J", num(s.inf_J)},
                      {"eps", num(s.eps)},
                      {"eps_tilde", num(s.eps_tilde)},
                      {"mu_fit", num(s.mu_fit)},
                      {"C_fit", num(s.C_fit)},
                      {"q_residual", num(s.q_residual)},
                      {"diagnostics", s.diagnostics}};
  }
  j["wall_clock_s"] = r.wall_clock;
  return j;
}

RunRecord run(const Scenario& s, const std::string& out_root, const RunOptions& opt) {
  s.validate();
  const auto t_start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.scenario = s;

  BenchmarkSetup setup = benchmark_model(s.c_N, s.c_ic, s.profile == "sin8" ? 8 : 2);
  if (s.coefficients == "heat") {
    setup.model.a = [](double, double) { return 1.0; };
    setup.model.b = [](double, double) { return 0.0; };
    setup.model.C_rc = 0;
  }
  if (s.C_rc >= 0) setup.model.C_rc = s.C_rc;
  const SemilinearModel& model = setup.model;

  const FemOperators ops = assemble(Grid1D(s.N, model.domain.L), model.domain.bc);
  const Vec y0 = sample(setup.y0, ops);

  FeedbackConfig fb;
  fb.ktype = s.ktype;
  fb.f_choice = s.f_choice;
  fb.lambda = s.lambda;
  fb.feed_on = s.feed_on;

  const bool need_proj = s.ktype != KType::Off || s.run_suffalpha || s.run_q_residual;
  std::optional<SpectralBasis> basis;
  std::optional<ObliqueProjector> proj;
  if (need_proj) {
    basis = first_modes(model.domain, s.M);
    proj.emplace(*basis, build_actuators(s.M, s.r, ops), ops);
    rec.theta_condition = proj->condition_number();
  }

  SimConfig sc;
  sc.N = s.N, sc.k = s.k, sc.T = s.T, sc.c_ic = s.c_ic, sc.profile = s.profile;
  sc.blowup_threshold = s.blowup_threshold;
  sc.treatment = s.treatment == "explicit" ? FeedbackTreatment::Explicit : FeedbackTreatment::Implicit;
  if (s.run_q_residual && s.snapshot_every > 0)
    for (double t = 0; t <= s.T + 1e-12; t += s.snapshot_every) sc.snapshot_times.push_back(t);

  Trajectory tr = simulate(model, fb, s.ktype != KType::Off ? &*proj : nullptr, ops, y0, sc);
  rec.outcome = tr.outcome;
  rec.blowup_time = tr.blowup_time;
  rec.control_energy = control_energy(tr.controls, s.r_frak);
  rec.initial_norm_V = tr.norm_V.front();
  rec.final_norm_V = tr.norm_V.back();
  rec.stabilized = is_stabilized(tr);

  if (s.run_decay_fit || s.run_suffalpha || s.run_q_residual) {
    StabilityReport rep;
    rep.mu_fit = rep.C_fit = rep.q_residual = std::numeric_limits<double>::quiet_NaN();
    if (s.run_suffalpha) {
      const double pn = operator_norm(*proj, ops);
      rec.proj_norm = pn;
      FrakInputs in;
      in.alpha_Mplus = eig_extremes(*basis, 1.0).alpha_Mplus;
      in.proj_norm = pn;
      in.C_rc = model.C_rc;
      in.C_NN2 = s.C_NN2;
      in.r_frak = s.r_frak;
      in.exps = exponent_record(model, 1);
      const Vec c0 = proj->eigen_coeffs(y0);
      in.frak_q = frak_q(c0, *basis, in.exps);
      in.h_base = mcal_q(c0, *proj, model, ops, s.f_choice, s.lambda, s.r_frak).h_base;
      in.Q0_vnorm = v_norm(y0 - proj->from_eigen_coeffs(c0), ops, model.domain.nu);
      const double mf = rep.mu_fit;
      rep = check_suffalpha(in);
      rep.mu_fit = rep.C_fit = rep.q_residual = mf;
    }
    if (s.run_decay_fit && tr.outcome == Outcome::Completed) {
      try {
        const DecayFit fit = decay_fit(tr, s.tail_fraction);
        rep.mu_fit = fit.mu_fit;
        rep.C_fit = fit.C_fit;
      } catch (const InvalidArgument&) {
      }
    }
    if (s.run_q_residual && !tr.snapshots.empty()) rep.q_residual = q_decoupling_residual(tr, *proj, fb).residual;
    rec.stability = rep;
  }

  rec.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  if (opt.write_files) {
    const fs::path dir = fs::path(s.output_dir.empty() ? out_root : s.output_dir) / s.name;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    rec.csv_path = (dir / "norms.csv").string();
    rec.json_path = (dir / "run.json").string();
    rec.svg_path = (dir / "plot.svg").string();
    write_norm_csv(tr, rec.csv_path);
    PlotOptions po;
    po.title = s.name;
    if (tr.outcome == Outcome::BlowUp) po.blowup_time = tr.blowup_time;
    emit_plot(rec.csv_path, rec.svg_path, po);
    std::ofstream jo(rec.json_path);
    if (!jo) throw std::runtime_error("cannot write " + rec.json_path);
    jo << to_json(rec).dump(2) << "\n";
  }
  if (opt.keep_trajectory) rec.trajectory = std::move(tr);
  return rec;
}

SweepResult sweep_M(const Scenario& tmpl, const std::vector<int>& Ms, int workers, const std::string& out_root,
                    bool write_files) {
  if (Ms.empty()) throw InvalidArgument("sweep_M: empty M range");
  for (std::size_t i = 1; i < Ms.size(); ++i)
    if (Ms[i] <= Ms[i - 1]) throw InvalidArgument("sweep_M: M range must be ascending");
  SweepResult res;
  res.rows.resize(Ms.size());
  std::vector<std::exception_ptr> errors(Ms.size());
  std::size_t next = 0;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lk(mu);
        if (next >= Ms.size()) return;
        i = next++;
      }
      try {
        Scenario s = tmpl;
        s.M = Ms[i];
        s.name = tmpl.name + "-M" + std::to_string(Ms[i]);
        s.run_decay_fit = true;
        const RunRecord r = run(s, out_root, {write_files, false});
        SweepRow row{Ms[i], r.outcome, std::numeric_limits<double>::quiet_NaN(), r.stabilized,
                     r.final_norm_V / r.initial_norm_V};
        if (r.stability) row.mu_fit = r.stability->mu_fit;
        res.rows[i] = row;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int nw = std::max(1, std::min<int>(workers, static_cast<int>(Ms.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < nw; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (const auto& row : res.rows)
    if (row.stabilized) {
      res.minimal_stabilizing_M = row.M;
      break;
    }
  return res;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

}  // namespace

std::string emit_plot(const std::string& csv_path, const std::string& svg_path, PlotOptions opt) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open " + csv_path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(csv_path + ": empty file", "");
  const auto header = split(line);
  const auto col_it = std::find(header.begin(), header.end(), opt.column);
  if (col_it == header.end()) throw ParseError(csv_path + ": missing column " + opt.column, opt.column);
  const std::size_t col = col_it - header.begin();
  std::vector<double> ts, vs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() <= col) throw ParseError(csv_path + ": short row", opt.column);
    const double t = std::strtod(cells[0].c_str(), nullptr), v = std::strtod(cells[col].c_str(), nullptr);
    if (!std::isfinite(v) || !(v > 0)) break;  // truncate at the first non-finite value
    ts.push_back(t);
    vs.push_back(v);
  }
  if (!opt.blowup_time) {
    const fs::path rj = fs::path(csv_path).parent_path() / "run.json";
    std::ifstream jin(rj);
    if (jin) {
      try {
        json j;
        jin >> j;
        if (j.value("outcome", "") == "BlowUp") opt.blowup_time = j.value("blowup_time", ts.empty() ? 0.0 : ts.back());
      } catch (const json::exception&) {
      }
    }
  }
  const std::string out = svg_path.empty() ? (fs::path(csv_path).replace_extension(".svg")).string() : svg_path;

  const double W = 640, H = 400, ml = 70, mr = 20, mt = 30, mb = 50;
  double t0 = ts.empty() ? 0 : ts.front(), t1 = ts.empty() ? 1 : ts.back();
  if (t1 <= t0) t1 = t0 + 1;
  double lo = 1, hi = 10;
  if (!vs.empty()) {
    lo = std::floor(std::log10(*std::min_element(vs.begin(), vs.end())));
    hi = std::ceil(std::log10(*std::max_element(vs.begin(), vs.end())));
    if (hi <= lo) hi = lo + 1;
  }
  auto X = [&](double t) { return ml + (W - ml - mr) * (t - t0) / (t1 - t0); };
  auto Y = [&](double v) { return H - mb - (H - mt - mb) * (std::log10(v) - lo) / (hi - lo); };

  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty())
    os << "<text x=\"" << W / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << esc(opt.title) << "</text>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  const int dec_step = std::max(1, static_cast<int>(std::ceil((hi - lo) / 10)));
  for (int d = static_cast<int>(lo); d <= static_cast<int>(hi); d += dec_step) {
    const double y = Y(std::pow(10.0, d));
    os << "<line x1=\"" << ml - 4 << "\" y1=\"" << y << "\" x2=\"" << ml << "\" y2=\"" << y << "\" stroke=\"black\"/>"
       << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\" font-size=\"11\">1e" << d << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double t = t0 + (t1 - t0) * i / 5, x = X(t);
    os << "<line x1=\"" << x << "\" y1=\"" << H - mb << "\" x2=\"" << x << "\" y2=\"" << H - mb + 4 << "\" stroke=\"black\"/>"
       << "<text x=\"" << x << "\" y=\"" << H - mb + 18 << "\" text-anchor=\"middle\" font-size=\"11\">" << t << "</text>\n";
  }
  os << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\" font-size=\"12\">t</text>\n"
     << "<text x=\"16\" y=\"" << (mt + H - mb) / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
     << (mt + H - mb) / 2 << ")\">" << esc(opt.column) << " (log)</text>\n";
  if (!ts.empty()) {
    os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
    const std::size_t stride = std::max<std::size_t>(1, ts.size() / 2000);
    for (std::size_t i = 0; i < ts.size(); i += stride) os << X(ts[i]) << "," << Y(vs[i]) << " ";
    if ((ts.size() - 1) % stride != 0) os << X(ts.back()) << "," << Y(vs.back());
    os << "\"/>\n";
  }
  if (opt.blowup_time) {
    const double x = ts.empty() ? ml : X(ts.back());
    os << "<line x1=\"" << x << "\" y1=\"" << mt << "\" x2=\"" << x << "\" y2=\"" << H - mb
       << "\" stroke=\"#b22222\" stroke-dasharray=\"4,3\"/>\n"
       << "<text x=\"" << x - 4 << "\" y=\"" << mt + 14 << "\" text-anchor=\"end\" font-size=\"12\" fill=\"#b22222\">blow-up (t="
       << *opt.blowup_time << ")</text>\n";
  }
  os << "</svg>\n";
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << os.str();
  return out;
}

}  // namespace parastab
