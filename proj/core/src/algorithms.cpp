#include "nlqc/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nlqc {

namespace {

constexpr std::size_t kMaxAlg1Qubits = 16;
constexpr std::size_t kMaxAlg2Qubits = 14;
constexpr std::size_t kMaxAlg2CountQubits = 10;

std::vector<QubitIndex> qubit_range(std::size_t first, std::size_t count) {
  std::vector<QubitIndex> out;
  out.reserve(count);
  for (std::size_t q = first; q < first + count; ++q) out.emplace_back(q);
  return out;
}

void check_sizes(std::size_t n, const OracleSpec& oracle, std::size_t cap, const char* who) {
  if (n < 1 || n > cap) {
    throw std::invalid_argument(std::string(who) + ": n must be in [1, " + std::to_string(cap) + "]");
  }
  if (oracle.num_vars() != n) {
    throw std::invalid_argument(std::string(who) + ": oracle has " + std::to_string(oracle.num_vars()) +
                                " variables, config says " + std::to_string(n));
  }
}

// Ry(pi/2) Z is the Hadamard; the jitter goes on the rotation angle.
Mat2 half_turn(NoiseModel& noise) { return ry(noise.perturb(kPi / 2)) * pauli_z(); }
Mat2 half_turn_inverse(NoiseModel& noise) { return pauli_z() * ry(noise.perturb(-kPi / 2)); }

double min_eigenvalue(const Mat2& rho) {
  const double a = rho(0, 0).real();
  const double d = rho(1, 1).real();
  const double disc = std::sqrt((a - d) * (a - d) + 4 * std::norm(rho(0, 1)));
  return std::max(0.0, (a + d - disc) / 2);
}

struct Step3 {
  bool ok = false;
  StateVector state{1};
  std::size_t trials = 0;
};

// Steps 1-3 of the first algorithm, repeated until the input register reads
// 0...0 or the trial budget runs out.
Step3 prepare_flag(std::size_t n, OracleSpec& oracle, NoiseModel& noise, RandomSource& rng, std::size_t max_trials) {
  const auto inputs = qubit_range(0, n);
  const QubitIndex flag(n);
  Step3 out;
  for (std::size_t trial = 0; trial < max_trials; ++trial) {
    StateVector st(n + 1);
    for (const auto& q : inputs) st.apply_1q(q, half_turn(noise));
    oracle.apply(st, inputs, flag);
    for (const auto& q : inputs) st.apply_1q(q, half_turn_inverse(noise));
    const auto rec = st.measure(inputs, rng);
    ++out.trials;
    if (rec.outcome_bits == 0) {
      out.ok = true;
      out.state = std::move(st);
      return out;
    }
  }
  return out;
}

QubitAmplitudePair flag_of(const StateVector& st, QubitIndex flag) {
  const auto c = st.conditional_qubit_state(flag, 0);
  return {c.c0, c.c1};
}

// Computational-basis measurement of a single-qubit pair; true for |1>.
bool measure_flag(const QubitAmplitudePair& f, RandomSource& rng) { return rng.uniform() < std::norm(f.c2) / f.norm(); }

std::size_t applications_needed(double half_gap, const StretchMap& m, std::size_t saturation) {
  double core = 0.0;
  if (half_gap < m.eta / 2) core = std::ceil(std::log((m.eta / 2) / half_gap) / m.lambda);
  return static_cast<std::size_t>(std::max(0.0, core)) + saturation;
}

StretchMap jittered(const StretchMap& base, NoiseModel& noise) {
  StretchMap m = base;
  m.lambda = std::min(noise.perturb(base.lambda), base.max_lambda() - 1e-9);
  return m;
}

struct StretchRun {
  std::size_t applications = 0;
  std::optional<std::size_t> to_threshold;
  std::vector<SeparationPoint> trajectory;
};

// Rotates the flag so `centre` sits on the region centre, then stretches.
// After Step 3 the register is |0...0> (x) flag, so the flag is carried as a
// single-qubit pair. The s = 0 reference starts as the flag's |0> component,
// so for f == 0 both follow bit-identical arithmetic.
StretchRun centre_and_stretch(QubitAmplitudePair& f, const Alg1Config& cfg, double centre, double half_gap,
                              NoiseModel& noise, std::vector<std::string>& notes) {
  StretchRun run;
  const Mat2 shift = ry(noise.perturb(cfg.stretch.theta0 - centre));
  QubitAmplitudePair reference{f.c1 != 0.0 ? f.c1 : Amplitude(1.0), 0.0};
  f = apply_unitary(shift, f);
  reference = apply_unitary(shift, reference);

  std::size_t k = applications_needed(half_gap, cfg.stretch, cfg.saturation_applications);
  if (k > cfg.max_applications) {
    notes.push_back("application budget " + std::to_string(cfg.max_applications) + " below the " +
                    std::to_string(k) + " needed; stopped early");
    k = cfg.max_applications;
  }
  auto record = [&](std::size_t j) {
    const double tf = to_bloch(f).theta;
    const double tr = to_bloch(reference).theta;
    const double d = bloch_distance(f, reference);
    // Both points in the region and on one meridian, so d is their polar gap.
    const bool inside = cfg.stretch.in_region(tf) && cfg.stretch.in_region(tr) && std::abs(d - std::abs(tf - tr)) < 1e-9;
    run.trajectory.push_back({j, d, inside});
    if (!run.to_threshold && tf >= cfg.decision_threshold * kPi) run.to_threshold = j;
  };
  record(0);
  for (std::size_t j = 1; j <= k; ++j) {
    const StretchMap m = jittered(cfg.stretch, noise);
    f = stretch_apply(f, m);
    reference = stretch_apply(reference, m);
    record(j);
  }
  run.applications = k;
  return run;
}

void validate_alg1(const Alg1Config& cfg, const OracleSpec& oracle, const char* who) {
  check_sizes(cfg.n, oracle, kMaxAlg1Qubits, who);
  cfg.stretch.validate();
  if (!(cfg.stretch.lambda > 0.0)) throw std::invalid_argument(std::string(who) + ": lambda must be positive");
  if (!(cfg.decision_threshold > 0.0 && cfg.decision_threshold < 1.0)) {
    throw std::invalid_argument(std::string(who) + ": decision_threshold must be in (0, 1)");
  }
  if (!(cfg.noise_sigma >= 0.0)) throw std::invalid_argument(std::string(who) + ": noise_sigma must be >= 0");
  if (cfg.max_trials < 1) throw std::invalid_argument(std::string(who) + ": max_trials must be >= 1");
}

void note_calls(RunReport& r) {
  if (r.oracle_calls > 1) {
    r.notes.push_back("oracle called " + std::to_string(r.oracle_calls) +
                      " times: one call per prepared state, including retried Step-3 outcomes");
  }
}

}  // namespace

NoiseModel::NoiseModel(double sigma, RandomSource& rng) : sigma_(sigma), rng_(&rng) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("NoiseModel: sigma must be finite and >= 0");
}

double NoiseModel::perturb(double parameter) {
  if (sigma_ == 0.0) return parameter;
  return parameter + sigma_ * rng_->normal();
}

double step3_success_probability(std::size_t n, std::uint64_t s) {
  const double big = std::ldexp(1.0, static_cast<int>(n));
  const double sd = static_cast<double>(s);
  return ((big - sd) * (big - sd) + sd * sd) / (big * big);
}

double flag_polar_angle(std::size_t n, std::uint64_t s) {
  const double big = std::ldexp(1.0, static_cast<int>(n));
  return 2 * std::atan2(static_cast<double>(s), big - static_cast<double>(s));
}

std::optional<double> fit_growth_factor(const std::vector<SeparationPoint>& trajectory) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t j = 0; j < trajectory.size(); ++j) {
    const bool starts_inside = trajectory[j].in_region;
    const bool follows_inside = j > 0 && trajectory[j - 1].in_region;
    if ((starts_inside || follows_inside) && trajectory[j].separation > 0.0) {
      pts.emplace_back(static_cast<double>(trajectory[j].iteration), std::log(trajectory[j].separation));
    }
  }
  if (pts.size() < 2) return std::nullopt;
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  if (sxx == 0.0) return std::nullopt;
  return std::exp(sxy / sxx);
}

std::size_t Alg1Config::default_trial_budget(double eta) {
  return static_cast<std::size_t>(std::ceil((kPi / eta) * (kPi / eta) - 1e-9));
}

RunReport run_algorithm1(const Alg1Config& cfg, OracleSpec& oracle) {
  validate_alg1(cfg, oracle, "run_algorithm1");
  RandomSource rng(cfg.seed);
  NoiseModel noise(cfg.noise_sigma, rng);
  RunReport r;
  r.algorithm = "alg1";
  r.mode = "decide";
  const auto calls0 = oracle.call_counter();
  const QubitIndex flag(cfg.n);

  auto prep = prepare_flag(cfg.n, oracle, noise, rng, cfg.max_trials);
  r.trials_used = prep.trials;
  r.oracle_calls = oracle.call_counter() - calls0;
  if (!prep.ok) {
    r.notes.push_back("trial budget of " + std::to_string(cfg.max_trials) + " exhausted without a 0...0 outcome");
    note_calls(r);
    return r;
  }
  auto f = flag_of(prep.state, flag);
  r.post_measurement_flag_amplitude = std::abs(f.c2);

  const double tau = flag_polar_angle(cfg.n, 1) / 2;
  auto run = centre_and_stretch(f, cfg, tau, tau, noise, r.notes);
  r.applications_used = run.applications;
  r.applications_to_threshold = run.to_threshold;
  r.separation_trajectory = std::move(run.trajectory);

  r.decision = measure_flag(f, rng);
  r.succeeded = true;
  note_calls(r);
  return r;
}

RunReport run_algorithm1_count(const Alg1Config& cfg, OracleSpec& oracle) {
  validate_alg1(cfg, oracle, "run_algorithm1_count");
  RandomSource rng(cfg.seed);
  NoiseModel noise(cfg.noise_sigma, rng);
  RunReport r;
  r.algorithm = "alg1";
  r.mode = "count";
  const auto calls0 = oracle.call_counter();
  const QubitIndex flag(cfg.n);

  std::uint64_t lo = 0;
  std::uint64_t hi = std::uint64_t{1} << cfg.n;
  const std::size_t max_rounds = cfg.n + 4;
  while (lo < hi) {
    if (r.rounds >= max_rounds) {
      r.notes.push_back("round limit reached with interval [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
      r.oracle_calls = oracle.call_counter() - calls0;
      note_calls(r);
      return r;
    }
    ++r.rounds;
    auto prep = prepare_flag(cfg.n, oracle, noise, rng, cfg.max_trials);
    r.trials_used += prep.trials;
    if (!prep.ok) {
      r.notes.push_back("trial budget exhausted in round " + std::to_string(r.rounds));
      r.oracle_calls = oracle.call_counter() - calls0;
      note_calls(r);
      return r;
    }
    const std::uint64_t mid = lo + (hi - lo) / 2;
    const double below = flag_polar_angle(cfg.n, mid);
    const double above = flag_polar_angle(cfg.n, mid + 1);
    auto f = flag_of(prep.state, flag);
    auto run = centre_and_stretch(f, cfg, (below + above) / 2, (above - below) / 2, noise, r.notes);
    r.applications_used += run.applications;
    if (measure_flag(f, rng)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  r.count = lo;
  r.oracle_calls = oracle.call_counter() - calls0;
  r.succeeded = true;
  note_calls(r);
  return r;
}

RunReport run_algorithm2(const Alg2Config& cfg, OracleSpec& oracle) {
  if (cfg.counting) return run_algorithm2_count(cfg, oracle);
  check_sizes(cfg.n, oracle, kMaxAlg2Qubits, "run_algorithm2");
  if (!(cfg.eps > 0.0)) throw std::invalid_argument("run_algorithm2: eps must be positive");
  if (!(cfg.noise_sigma >= 0.0)) throw std::invalid_argument("run_algorithm2: noise_sigma must be >= 0");
  RandomSource rng(cfg.seed);
  NoiseModel noise(cfg.noise_sigma, rng);
  RunReport r;
  r.algorithm = "alg2";
  r.mode = "decide";
  const auto calls0 = oracle.call_counter();

  std::shared_ptr<const CompositeNGate> gate = cfg.gate;
  if (cfg.gate_mode == GateMode::Synthesized && !gate) gate = std::make_shared<CompositeNGate>(build_N(cfg.hbar, cfg.eps));
  LocalStateMap n_map;
  if (cfg.gate_mode == GateMode::Synthesized) {
    n_map = [gate](const Eigen::VectorXcd& v) -> Eigen::VectorXcd { return gate->apply(Vec4(v)); };
  } else {
    n_map = [](const Eigen::VectorXcd& v) -> Eigen::VectorXcd { return n_table_apply(Vec4(v)); };
  }

  const std::uint64_t s = count_solutions_bruteforce(oracle);
  bool precondition_ok = true;
  if (s > 1) {
    precondition_ok = false;
    r.notes.push_back("precondition violated: oracle has " + std::to_string(s) +
                      " solutions, the decision variant assumes at most one");
  }

  const std::size_t n = cfg.n;
  const auto inputs = qubit_range(0, n);
  const QubitIndex flag(n);
  StateVector st(n + 1);
  for (const auto& q : inputs) st.apply_1q(q, half_turn(noise));
  oracle.apply(st, inputs, flag);

  const std::uint64_t flag_mask = 1;
  for (std::size_t k = 0; k < n; ++k) {
    const QubitIndex targets[] = {QubitIndex(k), flag};
    st.map_conditional(targets, n_map);
    if (noise.sigma() > 0.0) st.apply_1q(QubitIndex(k), ry(noise.perturb(0.0)));
    std::uint64_t census = 0;
    const auto amps = st.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
      if ((i & flag_mask) && std::abs(amps[i]) > kCensusThreshold) ++census;
    }
    r.flag_census.push_back(census);
  }
  r.applications_used = n;

  const Mat2 rho = st.reduced_density_matrix(flag);
  r.entanglement_residue = min_eigenvalue(rho);
  r.post_measurement_flag_amplitude = std::sqrt(std::max(0.0, rho(1, 1).real()));
  if (r.entanglement_residue > 10 * cfg.eps) {
    r.notes.push_back("flag still entangled: residue " + std::to_string(r.entanglement_residue) + " above " +
                      std::to_string(10 * cfg.eps));
  }

  const QubitIndex fq[] = {flag};
  r.decision = st.measure(fq, rng).outcome_bits == 1;
  r.trials_used = 1;
  r.oracle_calls = oracle.call_counter() - calls0;
  r.succeeded = precondition_ok;
  return r;
}

RunReport run_algorithm2_count(const Alg2Config& cfg, OracleSpec& oracle) {
  check_sizes(cfg.n, oracle, kMaxAlg2CountQubits, "run_algorithm2_count");
  const std::size_t n = cfg.n;
  const std::size_t width = cfg.counter_width == 0 ? n + 1 : cfg.counter_width;
  if (n + width > 24) throw std::invalid_argument("run_algorithm2_count: index plus counter exceeds 24 qubits");
  RandomSource rng(cfg.seed);
  NoiseModel noise(cfg.noise_sigma, rng);
  RunReport r;
  r.algorithm = "alg2";
  r.mode = "count";
  const auto calls0 = oracle.call_counter();

  const auto inputs = qubit_range(0, n);
  const auto counter = qubit_range(n, width);
  StateVector st(n + width);
  for (const auto& q : inputs) st.apply_1q(q, half_turn(noise));
  oracle.apply(st, inputs, counter.back());

  const std::uint64_t cdim = std::uint64_t{1} << width;
  auto merge = [cdim, width](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
    double w[2] = {0.0, 0.0};
    std::uint64_t dom[2] = {0, 0};
    for (int i = 0; i < 2; ++i) {
      double best = -1.0;
      for (std::uint64_t c = 0; c < cdim; ++c) {
        const double p = std::norm(v[static_cast<Eigen::Index>(i * cdim + c)]);
        w[i] += p;
        if (p > best) {
          best = p;
          dom[i] = c;
        }
      }
    }
    const std::uint64_t total = (w[0] > 0 ? dom[0] : 0) + (w[1] > 0 ? dom[1] : 0);
    if (total >= cdim) {
      throw std::overflow_error("counter overflow: value " + std::to_string(total) + " needs more than " +
                                std::to_string(width) + " counter qubits");
    }
    for (int i = 0; i < 2; ++i) {
      if (w[i] <= 0.0) continue;
      const Amplitude d = v[static_cast<Eigen::Index>(i * cdim + dom[i])];
      out[static_cast<Eigen::Index>(i * cdim + total)] = std::polar(std::sqrt(w[i]), std::arg(d));
    }
    return out;
  };

  try {
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<QubitIndex> targets{QubitIndex(k)};
      targets.insert(targets.end(), counter.begin(), counter.end());
      st.map_conditional(targets, merge);
      if (noise.sigma() > 0.0) st.apply_1q(QubitIndex(k), ry(noise.perturb(0.0)));
    }
  } catch (const std::overflow_error& e) {
    r.notes.push_back(e.what());
    r.oracle_calls = oracle.call_counter() - calls0;
    return r;
  }
  r.applications_used = n;
  r.count = st.measure(counter, rng).outcome_bits;
  r.trials_used = 1;
  r.oracle_calls = oracle.call_counter() - calls0;
  r.succeeded = true;
  return r;
}

}  // namespace nlqc
