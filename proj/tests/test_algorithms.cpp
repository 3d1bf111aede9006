#include <gtest/gtest.h>

#include <nlqc/algorithms.hpp>

#include "reference_sim.hpp"
#include "test_helpers.hpp"

using namespace nlqc;

namespace {

OracleSpec table(std::size_t n, std::vector<std::uint64_t> sols) { return OracleSpec(TruthTableOracle{n, std::move(sols)}); }

std::vector<std::uint64_t> first_k(std::uint64_t k) {
  std::vector<std::uint64_t> v(k);
  for (std::uint64_t i = 0; i < k; ++i) v[i] = i;
  return v;
}

bool alg1_correct(std::size_t n, const std::vector<std::uint64_t>& sols, double sigma, std::uint64_t seed) {
  Alg1Config cfg;
  cfg.n = n;
  cfg.noise_sigma = sigma;
  cfg.seed = seed;
  auto o = table(n, sols);
  const auto r = run_algorithm1(cfg, o);
  return r.succeeded && r.decision && *r.decision == !sols.empty();
}

bool alg2_correct(std::size_t n, const std::vector<std::uint64_t>& sols, double sigma, std::uint64_t seed) {
  Alg2Config cfg;
  cfg.n = n;
  cfg.noise_sigma = sigma;
  cfg.seed = seed;
  auto o = table(n, sols);
  const auto r = run_algorithm2(cfg, o);
  return r.succeeded && r.decision && *r.decision == !sols.empty();
}

// Flag state after Steps 1-3 conditioned on 0...0, through the library kernels.
ConditionalQubitState step3_flag(std::size_t n, OracleSpec& o, double* p0) {
  StateVector s(n + 1);
  std::vector<QubitIndex> in;
  for (std::size_t q = 0; q < n; ++q) in.emplace_back(q);
  for (auto q : in) s.apply_1q(q, hadamard());
  o.apply(s, in, QubitIndex(n));
  for (auto q : in) s.apply_1q(q, hadamard());
  if (p0) *p0 = s.probability_of_pattern(in, 0);
  return s.conditional_qubit_state(QubitIndex(n), 0);
}

}  // namespace

TEST(Step3, ClosedFormProbability) {
  EXPECT_NEAR(step3_success_probability(3, 1), 50.0 / 64.0, 1e-15);
  EXPECT_NEAR(step3_success_probability(4, 3), 178.0 / 256.0, 1e-15);
  EXPECT_NEAR(step3_success_probability(5, 16), 0.5, 1e-15);
  RandomSource rng(1);
  for (std::size_t n = 1; n <= 10; ++n) {
    for (int k = 0; k < 5; ++k) {
      const std::uint64_t s = rng.uniform_int((std::uint64_t{1} << n) + 1);
      auto o = OracleSpec(random_oracle(n, s, rng));
      double p0 = 0.0;
      step3_flag(n, o, &p0);
      const double N = std::ldexp(1.0, static_cast<int>(n));
      const double expect = ((N - s) * (N - s) + double(s) * s) / (N * N);
      EXPECT_NEAR(p0, expect, 1e-10) << n << " " << s;
      EXPECT_NEAR(step3_success_probability(n, s), expect, 1e-12);
      EXPECT_GE(p0, 0.25);
    }
  }
}

TEST(Step3, FlagAmplitudesMatchReference) {
  RandomSource rng(2);
  for (std::size_t n = 1; n <= 6; ++n) {
    const std::uint64_t s = rng.uniform_int((std::uint64_t{1} << n) + 1);
    const auto t = random_oracle(n, s, rng);
    std::vector<bool> f(std::size_t{1} << n, false);
    for (auto i : t.solutions) f[i] = true;
    const auto v = ref::step3_state(n, f);
    const double w = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    OracleSpec o(t);
    const auto c = step3_flag(n, o, nullptr);
    EXPECT_NEAR(std::abs(c.c0 - v[0] / w), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(c.c1 - v[1] / w), 0.0, 1e-12);
  }
}

TEST(Step3, FlagPolarAngle) {
  EXPECT_NEAR(flag_polar_angle(3, 1), 2 * std::atan(1.0 / 7.0), 1e-15);
  EXPECT_EQ(flag_polar_angle(3, 0), 0.0);
  EXPECT_NEAR(flag_polar_angle(2, 4), kPi, 1e-15);
}

TEST(Alg1, NoSolutionIsCertain) {
  for (std::size_t n : {1, 3, 6}) {
    Alg1Config cfg;
    cfg.n = n;
    auto o = table(n, {});
    const auto r = run_algorithm1(cfg, o);
    ASSERT_TRUE(r.decision.has_value());
    EXPECT_FALSE(*r.decision);
    EXPECT_TRUE(r.succeeded);
    EXPECT_EQ(r.oracle_calls, 1u);
    EXPECT_EQ(r.trials_used, 1u);
    EXPECT_EQ(r.post_measurement_flag_amplitude, 0.0);
    for (const auto& p : r.separation_trajectory) EXPECT_EQ(p.separation, 0.0);
  }
}

TEST(Alg1, SingleSolutionTrajectoryDoubles) {
  Alg1Config cfg;
  cfg.n = 3;
  bool seen = false;
  for (std::uint64_t seed = 0; seed < 20 && !seen; ++seed) {
    cfg.seed = seed;
    auto o = table(3, {6});
    const auto r = run_algorithm1(cfg, o);
    if (r.trials_used != 1) continue;
    seen = true;
    EXPECT_NEAR(r.post_measurement_flag_amplitude, 1.0 / std::sqrt(50.0), 1e-12);
    EXPECT_NEAR(r.separation_trajectory.front().separation, 2 * std::atan(1.0 / 7.0), 1e-12);
    const auto& tr = r.separation_trajectory;
    for (std::size_t k = 0; k + 1 < tr.size() && tr[k].in_region; ++k) {
      EXPECT_NEAR(tr[k + 1].separation / tr[k].separation, 2.0, 1e-9) << k;
    }
    ASSERT_TRUE(r.decision.has_value());
    EXPECT_TRUE(*r.decision);
    EXPECT_EQ(r.oracle_calls, 1u);
  }
  EXPECT_TRUE(seen);
}

TEST(Alg1, FittedGrowthIsTwo) {
  Alg1Config cfg;
  cfg.n = 8;
  auto o = table(8, {17});
  for (cfg.seed = 0;; ++cfg.seed) {
    const auto r = run_algorithm1(cfg, o);
    if (r.trials_used != 1) continue;
    const auto g = fit_growth_factor(r.separation_trajectory);
    ASSERT_TRUE(g.has_value());
    EXPECT_NEAR(*g, 2.0, 0.05);
    break;
  }
}

TEST(Alg1, ApplicationsToThresholdBound) {
  for (std::size_t n = 1; n <= 10; ++n) {
    for (std::uint64_t s = 1; s <= 4 && s <= (std::uint64_t{1} << n); ++s) {
      Alg1Config cfg;
      cfg.n = n;
      auto o = table(n, first_k(s));
      const auto r = run_algorithm1(cfg, o);
      ASSERT_TRUE(r.succeeded) << n << " " << s;
      if (flag_polar_angle(n, s) >= cfg.decision_threshold * kPi) continue;
      ASSERT_TRUE(r.applications_to_threshold.has_value()) << n << " " << s;
      const double bound = std::ceil((n * std::log(2.0) + std::log(1.0 / s)) / cfg.stretch.lambda) + 3;
      EXPECT_LE(double(*r.applications_to_threshold), bound) << n << " " << s;
    }
  }
}

TEST(Alg1, NoiselessAlwaysCorrect) {
  RandomSource rng(3);
  for (int k = 0; k < 40; ++k) {
    const std::size_t n = 1 + rng.uniform_int(6);
    const auto t = random_oracle(n, rng.uniform_int(3), rng);
    EXPECT_TRUE(alg1_correct(n, t.solutions, 0.0, k)) << n;
  }
}

TEST(Alg1, HeavyNoiseDegrades) {
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) ok += alg1_correct(3, {5}, 0.5, seed);
  EXPECT_LT(ok / 200.0, 0.9);
}

TEST(Alg1, TrialBudgetExhaustion) {
  Alg1Config cfg;
  cfg.n = 2;
  cfg.max_trials = 1;
  int failed = 0;
  for (cfg.seed = 0; cfg.seed < 50; ++cfg.seed) {
    auto o = table(2, {1, 2});  // P(00) = 1/2
    const auto r = run_algorithm1(cfg, o);
    if (!r.succeeded) {
      ++failed;
      EXPECT_FALSE(r.decision.has_value());
    }
  }
  EXPECT_GT(failed, 0);
}

TEST(Alg1, RejectsContractingStretch) {
  Alg1Config cfg;
  cfg.n = 2;
  cfg.stretch.lambda = -0.1;
  auto o = table(2, {1});
  EXPECT_THROW(run_algorithm1(cfg, o), std::invalid_argument);
}

TEST(Alg1, DefaultTrialBudget) { EXPECT_EQ(Alg1Config::default_trial_budget(kPi / 4), 16u); }

TEST(Alg1Count, Examples) {
  Alg1Config cfg;
  cfg.n = 3;
  auto zero = table(3, {});
  EXPECT_EQ(run_algorithm1_count(cfg, zero).count, std::optional<std::uint64_t>(0));
  auto three = table(3, {2, 5, 6});
  const auto r = run_algorithm1_count(cfg, three);
  EXPECT_EQ(r.count, std::optional<std::uint64_t>(3));
  EXPECT_LE(r.rounds, cfg.n + 4);
  cfg.n = 4;
  auto full = table(4, first_k(16));
  EXPECT_EQ(run_algorithm1_count(cfg, full).count, std::optional<std::uint64_t>(16));
}

TEST(Alg2, NoSolution) {
  Alg2Config cfg;
  cfg.n = 3;
  auto o = table(3, {});
  const auto r = run_algorithm2(cfg, o);
  ASSERT_TRUE(r.decision.has_value());
  EXPECT_FALSE(*r.decision);
  EXPECT_EQ(r.oracle_calls, 1u);
  EXPECT_EQ(r.flag_census, (std::vector<std::uint64_t>{0, 0, 0}));
}

TEST(Alg2, SingletonCensusDoubles) {
  Alg2Config cfg;
  cfg.n = 3;
  auto o = table(3, {5});
  const auto r = run_algorithm2(cfg, o);
  ASSERT_TRUE(r.decision.has_value());
  EXPECT_TRUE(*r.decision);
  EXPECT_EQ(r.flag_census, (std::vector<std::uint64_t>{2, 4, 8}));
  EXPECT_LE(r.entanglement_residue, 10 * cfg.eps);
  EXPECT_GE(r.post_measurement_flag_amplitude, std::sqrt(1 - 10 * cfg.eps));
}

TEST(Alg2, ExhaustiveThreeQubits) {
  std::vector<std::vector<std::uint64_t>> oracles{{}};
  for (std::uint64_t i = 0; i < 8; ++i) oracles.push_back({i});
  for (const auto& sols : oracles) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      Alg2Config cfg;
      cfg.n = 3;
      cfg.seed = seed;
      auto o = table(3, sols);
      const auto r = run_algorithm2(cfg, o);
      ASSERT_TRUE(r.decision.has_value());
      EXPECT_EQ(*r.decision, !sols.empty());
      EXPECT_EQ(r.oracle_calls, 1u);
      const double p1 = r.post_measurement_flag_amplitude * r.post_measurement_flag_amplitude;
      EXPECT_TRUE(p1 >= 1 - 10 * cfg.eps || p1 <= 10 * cfg.eps);
      for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(r.flag_census[k], sols.empty() ? 0u : (2u << k));
    }
  }
}

TEST(Alg2, DisentanglesAtLargerN) {
  for (std::size_t n : {5, 8}) {
    Alg2Config cfg;
    cfg.n = n;
    auto o = table(n, {(std::uint64_t{1} << n) - 3});
    const auto r = run_algorithm2(cfg, o);
    EXPECT_LE(r.entanglement_residue, 10 * cfg.eps);
    EXPECT_EQ(r.flag_census.back(), std::uint64_t{1} << n);
  }
}

TEST(Alg2, MultipleSolutionsViolatePrecondition) {
  Alg2Config cfg;
  cfg.n = 3;
  auto o = table(3, {1, 2});
  const auto r = run_algorithm2(cfg, o);
  EXPECT_FALSE(r.succeeded);
  EXPECT_FALSE(r.notes.empty());
}

TEST(Alg2, SynthesizedGateCascadeSensitivity) {
  // The synthesized N meets its table on the three pair classes, but the
  // states produced after the first merge are only close to them and the
  // gate amplifies that distance.
  Alg2Config cfg;
  cfg.n = 3;
  cfg.gate_mode = GateMode::Synthesized;
  auto o = table(3, {5});
  const auto r = run_algorithm2(cfg, o);
  ASSERT_FALSE(r.flag_census.empty());
  EXPECT_EQ(r.flag_census.front(), 2u);
  EXPECT_GT(r.entanglement_residue, 10 * cfg.eps);
  EXPECT_FALSE(r.notes.empty());
}

TEST(Alg2Count, Examples) {
  Alg2Config cfg;
  cfg.n = 3;
  cfg.counting = true;
  auto zero = table(3, {});
  EXPECT_EQ(run_algorithm2(cfg, zero).count, std::optional<std::uint64_t>(0));
  auto three = table(3, {1, 4, 6});
  const auto r = run_algorithm2_count(cfg, three);
  EXPECT_EQ(r.count, std::optional<std::uint64_t>(3));
  EXPECT_EQ(r.oracle_calls, 1u);
  cfg.counter_width = 4;
  auto full = table(3, first_k(8));
  EXPECT_EQ(run_algorithm2_count(cfg, full).count, std::optional<std::uint64_t>(8));
}

TEST(Alg2Count, OverflowReported) {
  Alg2Config cfg;
  cfg.n = 3;
  cfg.counting = true;
  cfg.counter_width = 2;
  auto o = table(3, first_k(5));
  const auto r = run_algorithm2_count(cfg, o);
  EXPECT_FALSE(r.succeeded);
  EXPECT_FALSE(r.notes.empty());
}

TEST(Counting, BothVariantsMatchBruteForce) {
  RandomSource rng(4);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 1 + rng.uniform_int(8);
    const auto t = random_oracle(n, rng.uniform_int((std::uint64_t{1} << n) + 1), rng);
    OracleSpec o1(t);
    OracleSpec o2(t);
    const auto expect = count_solutions_bruteforce(o1);
    Alg1Config c1;
    c1.n = n;
    c1.seed = k;
    Alg2Config c2;
    c2.n = n;
    c2.seed = k;
    EXPECT_EQ(run_algorithm1_count(c1, o1).count, std::optional<std::uint64_t>(expect));
    EXPECT_EQ(run_algorithm2_count(c2, o2).count, std::optional<std::uint64_t>(expect));
  }
}

TEST(Noise, ZeroSigmaIsBitIdentical) {
  Alg1Config cfg;
  cfg.n = 4;
  cfg.seed = 8;
  auto a = table(4, {3});
  auto b = table(4, {3});
  const auto r1 = run_algorithm1(cfg, a);
  cfg.noise_sigma = 0.0;
  const auto r2 = run_algorithm1(cfg, b);
  ASSERT_EQ(r1.separation_trajectory.size(), r2.separation_trajectory.size());
  for (std::size_t k = 0; k < r1.separation_trajectory.size(); ++k)
    EXPECT_EQ(r1.separation_trajectory[k].separation, r2.separation_trajectory[k].separation);
  RandomSource rng(1);
  NoiseModel none(0.0, rng);
  EXPECT_EQ(none.perturb(1.25), 1.25);
  EXPECT_EQ(rng.draws(), 0u);
}

TEST(Noise, PerturbStatistics) {
  RandomSource a(77);
  RandomSource b(77);
  NoiseModel na(0.3, a);
  NoiseModel nb(0.3, b);
  const int draws = 100000;
  double sum = 0.0;
  double sq = 0.0;
  for (int k = 0; k < draws; ++k) {
    const double x = na.perturb(0.0);
    ASSERT_EQ(x, nb.perturb(0.0));
    sum += x;
    sq += x * x;
  }
  EXPECT_LT(std::abs(sum / draws), 5 * 0.3 / std::sqrt(double(draws)));
  EXPECT_NEAR(std::sqrt(sq / draws), 0.3, 0.01);
}

TEST(Noise, Alg2DegradesMonotonically) {
  int ok_small = 0;
  int ok_large = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    ok_small += alg2_correct(4, {9}, 1e-3, seed);
    ok_large += alg2_correct(4, {9}, 1e-1, seed);
  }
  EXPECT_GE(ok_small, ok_large);
}

TEST(FitGrowth, SyntheticTrajectory) {
  std::vector<SeparationPoint> tr;
  double s = 0.01;
  for (std::size_t k = 0; k < 6; ++k, s *= 1.5) tr.push_back({k, s, true});
  tr.push_back({6, s, false});
  tr.push_back({7, 3.0, false});
  const auto g = fit_growth_factor(tr);
  ASSERT_TRUE(g.has_value());
  EXPECT_NEAR(*g, 1.5, 1e-12);
  EXPECT_FALSE(fit_growth_factor({}).has_value());
  EXPECT_FALSE(fit_growth_factor({{0, 0.0, true}, {1, 0.0, true}}).has_value());
}
