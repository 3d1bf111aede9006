#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <nlqc/algorithms.hpp>
#include <nlqc/report.hpp>

namespace nlqc::cli {

namespace {

struct Options {
  std::string algorithm = "alg2";
  std::string input;
  std::string truth_table;
  std::uint64_t seed = 0;
  double noise_sigma = 0.0;
  double eps = 1e-3;
  std::string hbar = "0,0,1";
  double lambda = StretchMap{}.lambda;
  double eta = StretchMap{}.eta;
  double theta0 = StretchMap{}.theta0;
  double threshold = 0.75;
  std::size_t max_trials = 0;
  std::size_t max_applications = 400;
  std::size_t saturation = 25;
  std::string gate = "table";
  std::size_t counter_width = 0;
  std::string out;
  std::string report;
  bool record_wall_time = false;
  // dynamics
  std::string state = "0.7071067811865476,0,0.7071067811865476,0";
  double t_end = 20.0;
  std::size_t samples = 201;
  double dt = 1e-3;
};

class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CliError(kUsageError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CliError(kUsageError, "cannot write '" + path + "'");
  f << text;
}

OracleSpec load_oracle(const Options& o) {
  if (o.input.empty() == o.truth_table.empty()) {
    throw CliError(kUsageError, "exactly one of --input (DIMACS) or --truth-table is required");
  }
  try {
    if (!o.input.empty()) return OracleSpec(parse_dimacs(read_file(o.input)));
    return OracleSpec(parse_truth_table(read_file(o.truth_table)));
  } catch (const ParseError& e) {
    throw CliError(kUsageError, (o.input.empty() ? o.truth_table : o.input) + ": " + e.what());
  }
}

HbarFunction hbar_of(const Options& o) {
  try {
    return parse_hbar(o.hbar);
  } catch (const std::invalid_argument& e) {
    throw CliError(kUsageError, e.what());
  }
}

StretchMap stretch_of(const Options& o) {
  StretchMap m{o.theta0, o.eta, o.lambda};
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw CliError(kUsageError, e.what());
  }
  return m;
}

Alg1Config alg1_config(const Options& o, std::size_t n) {
  Alg1Config c;
  c.n = n;
  c.stretch = stretch_of(o);
  c.max_trials = o.max_trials ? o.max_trials : Alg1Config::default_trial_budget(o.eta);
  c.max_applications = o.max_applications;
  c.saturation_applications = o.saturation;
  c.noise_sigma = o.noise_sigma;
  c.seed = o.seed;
  c.decision_threshold = o.threshold;
  return c;
}

Alg2Config alg2_config(const Options& o, std::size_t n) {
  Alg2Config c;
  c.n = n;
  c.gate_mode = (o.gate == "synthesized") ? GateMode::Synthesized : GateMode::Table;
  c.hbar = hbar_of(o);
  c.eps = o.eps;
  c.counter_width = o.counter_width;
  c.noise_sigma = o.noise_sigma;
  c.seed = o.seed;
  return c;
}

nlohmann::json config_echo(const std::string& command, const Options& o) {
  nlohmann::json j;
  j["command"] = command;
  j["algorithm"] = o.algorithm;
  j["input"] = o.input;
  j["truth_table"] = o.truth_table;
  j["seed"] = o.seed;
  j["noise_sigma"] = o.noise_sigma;
  j["eps"] = o.eps;
  j["hbar"] = o.hbar;
  j["lambda"] = o.lambda;
  j["eta"] = o.eta;
  j["theta0"] = o.theta0;
  j["decision_threshold"] = o.threshold;
  j["gate"] = o.gate;
  j["counter_width"] = o.counter_width;
  return j;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

using Clock = std::chrono::steady_clock;

void emit_report(ReportDocument doc, const Options& o, Clock::time_point start, std::ostream& out,
                 const std::string& path) {
  if (o.record_wall_time) doc.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
  write_output(path, serialize(doc), out);
}

int cmd_run(const std::string& command, const Options& o, std::ostream& out) {
  const auto start = Clock::now();
  if (!(o.eps > 0.0)) throw CliError(kUsageError, "--eps must be positive");
  if (!(o.noise_sigma >= 0.0)) throw CliError(kUsageError, "--noise-sigma must be non-negative");
  OracleSpec oracle = load_oracle(o);
  const std::size_t n = oracle.num_vars();
  RunReport r;
  try {
    if (o.algorithm == "alg1") {
      const auto cfg = alg1_config(o, n);
      r = (command == "solve") ? run_algorithm1(cfg, oracle) : run_algorithm1_count(cfg, oracle);
    } else {
      auto cfg = alg2_config(o, n);
      cfg.counting = (command == "count");
      r = run_algorithm2(cfg, oracle);
    }
  } catch (const SynthesisError& e) {
    throw CliError(kBudgetExhausted, std::string("synthesis failed at ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw CliError(kUsageError, e.what());
  }
  ReportDocument doc;
  doc.command = command;
  doc.config = config_echo(command, o);
  doc.report = r;
  emit_report(doc, o, start, out, o.out);
  return r.succeeded ? kOk : kBudgetExhausted;
}

int cmd_dynamics(const Options& o, std::ostream& out) {
  const HbarFunction h = hbar_of(o);
  std::vector<double> v;
  {
    std::stringstream ss(o.state);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        v.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw CliError(kUsageError, "--state: bad number '" + item + "'");
      }
    }
  }
  if (v.size() != 4) throw CliError(kUsageError, "--state expects re1,im1,re2,im2");
  const QubitAmplitudePair q{{v[0], v[1]}, {v[2], v[3]}};
  if (!(q.norm() > 0.0)) throw CliError(kUsageError, "--state must be nonzero");
  if (!(o.t_end >= 0.0) || o.samples < 1 || !(o.dt > 0.0)) {
    throw CliError(kUsageError, "invalid time grid: need t_end >= 0, samples >= 1, dt > 0");
  }
  std::vector<TrajectorySample> traj;
  try {
    traj = weinberg_trajectory(q, h, o.t_end, o.samples, o.dt);
  } catch (const std::exception& e) {
    throw CliError(kUsageError, e.what());
  }
  std::ostringstream ss;
  ss << "t,re_c1,im_c1,re_c2,im_c2,residual\n";
  for (const auto& s : traj) {
    ss << fmt(s.t) << ',' << fmt(s.closed.c1.real()) << ',' << fmt(s.closed.c1.imag()) << ','
       << fmt(s.closed.c2.real()) << ',' << fmt(s.closed.c2.imag()) << ',' << fmt(s.residual) << '\n';
  }
  write_output(o.out, ss.str(), out);
  return kOk;
}

int cmd_ngate_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  if (!(o.eps > 0.0)) throw CliError(kUsageError, "--eps must be positive");
  const HbarFunction h = hbar_of(o);
  ReportDocument doc;
  doc.command = "ngate-verify";
  doc.config = config_echo("ngate-verify", o);
  try {
    const auto g = build_N(h, o.eps);
    doc.extra = gate_audit(g);
    bool ok = true;
    for (const auto& c : g.case_results()) ok = ok && c.fidelity >= 1.0 - o.eps;
    doc.extra["verified"] = ok;
    emit_report(doc, o, start, out, o.out);
    if (!ok) err << "ngate-verify: fidelity below 1 - eps (min " << fmt(g.min_fidelity()) << ")\n";
    return ok ? kOk : kBudgetExhausted;
  } catch (const SynthesisError& e) {
    doc.extra = {{"verified", false}, {"failed_stage", e.stage()}, {"diagnostic", e.what()}};
    emit_report(doc, o, start, out, o.out);
    err << "ngate-verify: synthesis failed: " << e.what() << "\n";
    return kBudgetExhausted;
  }
}

int cmd_separation(const Options& o, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  OracleSpec oracle = load_oracle(o);
  RunReport r;
  try {
    r = run_algorithm1(alg1_config(o, oracle.num_vars()), oracle);
  } catch (const std::invalid_argument& e) {
    throw CliError(kUsageError, e.what());
  }
  const auto growth = fit_growth_factor(r.separation_trajectory);
  std::ostringstream ss;
  ss << "k,bloch_separation,in_region\n";
  for (const auto& p : r.separation_trajectory) {
    ss << p.iteration << ',' << fmt(p.separation) << ',' << (p.in_region ? 1 : 0) << '\n';
  }
  write_output(o.out, ss.str(), out);
  err << "fitted growth factor: " << (growth ? fmt(*growth) : std::string("n/a")) << "\n";
  if (!o.report.empty()) {
    ReportDocument doc;
    doc.command = "separation";
    doc.config = config_echo("separation", o);
    doc.report = r;
    doc.extra["growth_factor"] = growth ? nlohmann::json(*growth) : nlohmann::json(nullptr);
    emit_report(doc, o, start, out, o.report);
  }
  return r.succeeded ? kOk : kBudgetExhausted;
}

void add_oracle_flags(CLI::App* app, Options& o) {
  app->add_option("--input", o.input, "DIMACS CNF file");
  app->add_option("--truth-table", o.truth_table, "truth-table JSON file {\"num_vars\":n,\"solutions\":[...]}");
  app->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  app->add_option("--noise-sigma", o.noise_sigma, "Gaussian jitter (radians) on gate angles and lambda")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
}

void add_stretch_flags(CLI::App* app, Options& o) {
  app->add_option("--lambda", o.lambda, "stretch exponent per application")->capture_default_str();
  app->add_option("--eta", o.eta, "width of the stretch region (radians)")->capture_default_str();
  app->add_option("--theta0", o.theta0, "centre of the stretch region (polar angle)")->capture_default_str();
  app->add_option("--threshold", o.threshold, "decision threshold as a fraction of pi")->capture_default_str();
  app->add_option("--max-trials", o.max_trials, "Step-3 trial budget (0 = ceil((pi/eta)^2))")->capture_default_str();
  app->add_option("--max-applications", o.max_applications, "stretch application budget")->capture_default_str();
  app->add_option("--saturation", o.saturation, "extra applications after the separation leaves the region")
      ->capture_default_str();
}

void add_gate_flags(CLI::App* app, Options& o) {
  app->add_option("--eps", o.eps, "synthesis / disentanglement tolerance")->capture_default_str();
  app->add_option("--hbar", o.hbar, "hbar(a) coefficients c0,c1,...")->capture_default_str();
  app->add_option("--gate", o.gate, "N gate form for alg2")
      ->check(CLI::IsMember({"table", "synthesized"}))
      ->capture_default_str();
}

void add_output_flags(CLI::App* app, Options& o) {
  app->add_option("--out", o.out, "output file (default stdout)");
  app->add_flag("--record-wall-time", o.record_wall_time, "add wall_time to the report (breaks byte-identity)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nonlinear (Weinberg) quantum computation simulator", "nlqc"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);
  Options o;

  auto* solve = app.add_subcommand("solve", "decide whether f has a solution");
  auto* count = app.add_subcommand("count", "count the solutions of f");
  for (auto* sub : {solve, count}) {
    sub->add_option("--algorithm", o.algorithm, "alg1 or alg2")
        ->check(CLI::IsMember({"alg1", "alg2"}))
        ->capture_default_str();
    add_oracle_flags(sub, o);
    add_stretch_flags(sub, o);
    add_gate_flags(sub, o);
    sub->add_option("--counter-width", o.counter_width, "alg2 counter qubits (0 = n + 1)")->capture_default_str();
    add_output_flags(sub, o);
  }

  auto* dyn = app.add_subcommand("dynamics", "closed-form Weinberg trajectory checked against RK4");
  dyn->add_option("--hbar", o.hbar, "hbar(a) coefficients c0,c1,...")->capture_default_str();
  dyn->add_option("--state", o.state, "initial amplitudes re1,im1,re2,im2")->capture_default_str();
  dyn->add_option("--t-end", o.t_end, "final time")->capture_default_str();
  dyn->add_option("--samples", o.samples, "number of rows, including t = 0")->capture_default_str();
  dyn->add_option("--dt", o.dt, "integrator step")->capture_default_str();
  dyn->add_option("--out", o.out, "output file (default stdout)");

  auto* ngv = app.add_subcommand("ngate-verify", "synthesize N and check it against its truth table");
  ngv->add_option("--eps", o.eps, "tolerance")->capture_default_str();
  ngv->add_option("--hbar", o.hbar, "hbar(a) coefficients c0,c1,...")->capture_default_str();
  add_output_flags(ngv, o);

  auto* sep = app.add_subcommand("separation", "per-application separation of the first algorithm");
  add_oracle_flags(sep, o);
  add_stretch_flags(sep, o);
  sep->add_option("--out", o.out, "table file (default stdout)");
  sep->add_option("--report", o.report, "also write a report document here");
  sep->add_flag("--record-wall-time", o.record_wall_time, "add wall_time to the report");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*solve) return cmd_run("solve", o, out);
    if (*count) return cmd_run("count", o, out);
    if (*dyn) return cmd_dynamics(o, out);
    if (*ngv) return cmd_ngate_verify(o, out, err);
    return cmd_separation(o, out, err);
  } catch (const CliError& e) {
    err << "nlqc: " << e.what() << "\n";
    return e.code();
  } catch (const std::exception& e) {
    err << "nlqc: " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace nlqc::cli
