#include <gtest/gtest.h>

#include <nlqc/nonlinear_map.hpp>
#include <nlqc/weinberg.hpp>

#include "test_helpers.hpp"

using namespace nlqc;

namespace {

QubitAmplitudePair random_pair(RandomSource& rng) {
  QubitAmplitudePair q{testing_helpers::random_amp(rng), testing_helpers::random_amp(rng)};
  const double n = std::sqrt(q.norm());
  q.c1 /= n;
  q.c2 /= n;
  return q;
}

double pair_diff(const QubitAmplitudePair& p, const QubitAmplitudePair& q) {
  return std::max(std::abs(p.c1 - q.c1), std::abs(p.c2 - q.c2));
}

// Test-side derivative, independent of HbarFunction::derivative.
double fd_derivative(const HbarFunction& h, double a) {
  const double e = 1e-6;
  const double lo = std::max(0.0, a - e);
  const double hi = std::min(1.0, a + e);
  return (h.value(hi) - h.value(lo)) / (hi - lo);
}

}  // namespace

TEST(Hbar, Values) {
  EXPECT_EQ(HbarFunction::linear(3.0).value(0.0), 0.0);
  EXPECT_DOUBLE_EQ(HbarFunction::quadratic().value(0.5), 0.25);
  EXPECT_DOUBLE_EQ(HbarFunction({1.0, 2.0}).value(1.0), 3.0);
  EXPECT_THROW(HbarFunction::quadratic().value(1.5), std::domain_error);
  EXPECT_THROW(HbarFunction::quadratic().value(-0.1), std::domain_error);
}

TEST(Hbar, ParsesCoefficientList) {
  const auto h = parse_hbar("0.5, -1, 2");
  EXPECT_EQ(h.coefficients(), (std::vector<double>{0.5, -1.0, 2.0}));
  EXPECT_THROW(parse_hbar("1,,2"), std::invalid_argument);
  EXPECT_THROW(parse_hbar("x"), std::invalid_argument);
}

TEST(Omega, LinearIsZeroAndKappa) {
  const auto h = HbarFunction::linear(1.7);
  for (double a : {0.0, 0.3, 1.0}) {
    const auto w = omega12(h, a);
    EXPECT_NEAR(w.omega1, 0.0, 1e-15);
    EXPECT_NEAR(w.omega2, 1.7, 1e-15);
  }
}

TEST(Omega, AtZero) {
  const HbarFunction h({0.4, -1.2, 0.7});
  const auto w = omega12(h, 0.0);
  EXPECT_NEAR(w.omega1, 0.4, 1e-15);
  EXPECT_NEAR(w.omega2, 0.4 - 1.2, 1e-15);
}

TEST(Omega, QuadraticAgainstFiniteDifferences) {
  const auto h = HbarFunction::quadratic();
  for (double a : {0.1, 0.25, 0.5, 0.9}) {
    EXPECT_NEAR(h.derivative(a), fd_derivative(h, a), 1e-8);
    const auto w = omega12(h, a);
    EXPECT_NEAR(w.omega1, -a * a, 1e-14);
    EXPECT_NEAR(w.omega2, 2 * a - a * a, 1e-14);
  }
}

TEST(Omega, CubicAgainstFiniteDifferences) {
  const HbarFunction h({0.3, -0.5, 1.1, -0.8});
  for (double a : {0.05, 0.4, 0.77}) {
    const double d = fd_derivative(h, a);
    const auto w = omega12(h, a);
    EXPECT_NEAR(w.omega1, h.value(a) - a * d, 1e-8);
    EXPECT_NEAR(w.omega2, h.value(a) + (1 - a) * d, 1e-8);
  }
}

TEST(ClosedForm, ZeroTimeIsIdentity) {
  RandomSource rng(1);
  const auto q = random_pair(rng);
  EXPECT_EQ(pair_diff(evolve_closed_form(q, HbarFunction::quadratic(), 0.0), q), 0.0);
}

TEST(ClosedForm, GroundStateOnlyPicksUpPhase) {
  const HbarFunction h({0.8, 0.3});
  const auto out = evolve_closed_form({1.0, 0.0}, h, 2.5);
  EXPECT_NEAR(std::abs(out.c1 - std::polar(1.0, -0.8 * 2.5)), 0.0, 1e-15);
  EXPECT_EQ(out.c2, Amplitude(0.0));
}

TEST(ClosedForm, EqualSuperpositionUnderQuadratic) {
  const double r = 1.0 / std::sqrt(2.0);
  const auto out = evolve_closed_form({r, r}, HbarFunction::quadratic(), kPi);
  EXPECT_NEAR(std::abs(out.c1 - r * std::polar(1.0, kPi / 4)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(out.c2 - r * std::polar(1.0, -3 * kPi / 4)), 0.0, 1e-14);
  const auto integ = evolve_integrated({r, r}, HbarFunction::quadratic(), kPi, 1e-3);
  EXPECT_LT(pair_diff(out, integ), 1e-8);
}

TEST(ClosedForm, MagnitudesExactlyConserved) {
  RandomSource rng(2);
  for (int rep = 0; rep < 50; ++rep) {
    const auto q = random_pair(rng);
    const auto out = evolve_closed_form(q, HbarFunction({0.1, -0.7, 1.3}), 10 * rng.uniform());
    EXPECT_NEAR(std::abs(out.c1), std::abs(q.c1), 1e-15);
    EXPECT_NEAR(std::abs(out.c2), std::abs(q.c2), 1e-15);
  }
  EXPECT_THROW(evolve_closed_form({0.0, 0.0}, HbarFunction::quadratic(), 1.0), std::invalid_argument);
}

TEST(Integrator, LinearLimitIsUnitary) {
  RandomSource rng(3);
  const double kappa = 1.3;
  const double t = 7.0;
  const auto q = random_pair(rng);
  const auto out = evolve_integrated(q, HbarFunction::linear(kappa), t, 1e-3);
  EXPECT_NEAR(std::abs(out.c1 - q.c1), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(out.c2 - q.c2 * std::polar(1.0, -kappa * t)), 0.0, 1e-8);
}

TEST(Integrator, RejectsBadSteps) {
  EXPECT_THROW(evolve_integrated({1.0, 0.0}, HbarFunction::quadratic(), 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(evolve_integrated({1.0, 0.0}, HbarFunction::quadratic(), -1.0, 1e-3), std::invalid_argument);
  EXPECT_THROW(evolve_integrated({1.0, 0.0}, HbarFunction::quadratic(), 1e6, 1e-6), std::length_error);
}

TEST(Integrator, AgreesWithClosedFormOnRandomCubics) {
  RandomSource rng(4);
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t degree = rng.uniform_int(4);
    std::vector<double> c(degree + 1);
    for (auto& x : c) x = 2 * rng.uniform() - 1;
    const HbarFunction h(c);
    const auto q = random_pair(rng);
    const double t = 20 * rng.uniform();
    worst = std::max(worst, pair_diff(evolve_closed_form(q, h, t), evolve_integrated(q, h, t, 1e-3)));
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(Integrator, LongRunQuadraticNormAndAgreement) {
  RandomSource rng(5);
  for (int rep = 0; rep < 3; ++rep) {
    const auto q = random_pair(rng);
    const auto out = evolve_integrated(q, HbarFunction::quadratic(), 100.0, 1e-3);
    EXPECT_NEAR(out.norm(), 1.0, 1e-8);
    EXPECT_LT(pair_diff(out, evolve_closed_form(q, HbarFunction::quadratic(), 100.0)), 1e-8);
  }
}

TEST(Trajectory, SamplesOnUniformGrid) {
  const auto tr = weinberg_trajectory({0.6, 0.8}, HbarFunction::quadratic(), 2.0, 5, 1e-3);
  ASSERT_EQ(tr.size(), 5u);
  EXPECT_EQ(tr.front().t, 0.0);
  EXPECT_DOUBLE_EQ(tr.back().t, 2.0);
  for (const auto& s : tr) EXPECT_LT(s.residual, 1e-9);
}

TEST(Homogeneity, ValidHamiltonian) {
  RandomSource rng(6);
  const auto q = random_pair(rng);
  EXPECT_EQ(homogeneity_check(HbarFunction::quadratic(), q, 1.0), 0.0);
  EXPECT_LE(homogeneity_check(HbarFunction::quadratic(), q, 2.0), 1e-10);
  EXPECT_LE(homogeneity_check(HbarFunction({0.2, 0.5, -1.0, 0.3}), q, 3.7), 1e-10);
}

TEST(Homogeneity, CorruptedHamiltonianDetected) {
  RandomSource rng(7);
  const auto q = random_pair(rng);
  const auto hb = HbarFunction::quadratic();
  const HamiltonianFunction bad = [&](const QubitAmplitudePair& p) { return p.norm() * p.norm() * hb.value(p.a()); };
  EXPECT_GT(homogeneity_check(bad, q, 2.0), 1e-3);
  const HamiltonianFunction good = [&](const QubitAmplitudePair& p) { return p.norm() * hb.value(p.a()); };
  EXPECT_LE(homogeneity_check(good, q, 2.0), 1e-10);
}

TEST(Conditional, ProductStateSingleBranch) {
  auto s = StateVector::basis(2, 2);  // |1>|0>
  const auto h = HbarFunction::quadratic();
  s.apply_1q(QubitIndex(1), ry(0.9));
  const auto c = s.conditional_qubit_state(QubitIndex(1), 1);
  const auto expect = evolve_closed_form({c.c0, c.c1}, h, 3.0);
  const QubitMap m = [&](const QubitAmplitudePair& p) { return evolve_closed_form(p, h, 3.0); };
  EXPECT_EQ(apply_conditional_nonlinear(s, QubitIndex(1), m), 1u);
  EXPECT_NEAR(std::abs(s[2] - expect.c1), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s[3] - expect.c2), 0.0, 1e-15);
}

TEST(Conditional, UnitaryMapMatchesGate) {
  RandomSource rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    auto a = testing_helpers::random_state(3, rng);
    auto b = a;
    const Mat2 u = testing_helpers::random_unitary(rng);
    const QubitIndex t(rng.uniform_int(3));
    a.apply_1q(t, u);
    NonlinearMap m;
    m.then_unitary(u);
    apply_conditional_nonlinear(b, t, m);
    EXPECT_LT(testing_helpers::max_diff(b, testing_helpers::as_vector(a)), 1e-10);
  }
}

TEST(Conditional, BellStateCollapsingMap) {
  const double r = 1.0 / std::sqrt(2.0);
  auto s = StateVector::from_amplitudes({r, 0, 0, r});
  const QubitMap to_zero = [](const QubitAmplitudePair&) { return QubitAmplitudePair{1.0, 0.0}; };
  EXPECT_EQ(apply_conditional_nonlinear(s, QubitIndex(1), to_zero), 2u);
  Eigen::VectorXcd expect(4);
  expect << r, 0, r, 0;
  EXPECT_LT(testing_helpers::max_diff(s, expect), 1e-15);
}

TEST(Conditional, LinearLimitRecoversSuperposition) {
  RandomSource rng(9);
  const double kappa = 0.9;
  const double t = 4.2;
  Mat2 d = Mat2::Identity();
  d(1, 1) = std::polar(1.0, -kappa * t);
  for (int rep = 0; rep < 20; ++rep) {
    auto a = testing_helpers::random_state(4, rng);
    auto b = a;
    const QubitIndex target(rng.uniform_int(4));
    a.apply_1q(target, d);
    NonlinearMap m;
    m.then_evolve(HbarFunction::linear(kappa), t);
    apply_conditional_nonlinear(b, target, m);
    EXPECT_LT(testing_helpers::max_diff(b, testing_helpers::as_vector(a)), 1e-9);
  }
}

TEST(Conditional, NonlinearMapPreservesNorm) {
  RandomSource rng(10);
  NonlinearMap m;
  m.then_unitary(ry(0.4)).then_evolve(HbarFunction::quadratic(), 13.0).then_stretch(StretchMap{});
  for (int rep = 0; rep < 20; ++rep) {
    auto s = testing_helpers::random_state(4, rng);
    apply_conditional_nonlinear(s, QubitIndex(rng.uniform_int(4)), m);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-10);
  }
}

TEST(PhaseTime, LinearHasNoSolution) {
  EXPECT_THROW(find_phase_time(HbarFunction::linear(1.0), kPi / 8, 0.5, 50.0), PhaseTimeNotFound);
  EXPECT_THROW(find_phase_time(HbarFunction::linear(1.0), kPi / 8, 0.5, 50.0, PhaseCondition::Relative),
               PhaseTimeNotFound);
}

TEST(PhaseTime, QuadraticAbsoluteConditionIsBoundedAway) {
  // For hbar = a^2 the four phases satisfy w2(aA) - w1(aA) - w2(aB) + w1(aB) = 2 (aA - aB),
  // which combined with w1(aA) - w1(aB) = aB^2 - aA^2 = aB - aA pins the phase defects so that
  // at least one of them is >= pi/4, i.e. residual >= 2 sin(pi/8).
  const double bound = 2 * std::sin(kPi / 8);
  try {
    find_phase_time(HbarFunction::quadratic(), kPi / 8, 1e-2, 200.0);
    FAIL() << "expected PhaseTimeNotFound";
  } catch (const PhaseTimeNotFound& e) {
    EXPECT_GE(e.best_residual(), bound - 1e-9);
    EXPECT_EQ(e.t_max(), 200.0);
    EXPECT_NEAR(phase_residual(HbarFunction::quadratic(), kPi / 8, e.best_t(), PhaseCondition::Absolute),
                e.best_residual(), 1e-12);
  }
}

TEST(PhaseTime, VacuousToleranceAcceptsZero) {
  const auto sol = find_phase_time(HbarFunction::quadratic(), kPi / 8, 2.0, 10.0);
  EXPECT_EQ(sol.t_star, 0.0);
  EXPECT_LE(sol.residual, 2.0);
}

TEST(PhaseTime, RelativeConditionSolved) {
  const double phi = kPi / 8;
  const auto sol = find_phase_time(HbarFunction::quadratic(), phi, 1e-2, 100.0, PhaseCondition::Relative);
  EXPECT_LE(sol.residual, 1e-2);
  EXPECT_EQ(sol.phi, phi);
  // hbar' = 2a for a^2: relative precession e^{-i 2 aA t} must equal -e^{-i 2 aB t}.
  const double aA = std::sin(phi) * std::sin(phi);
  const double aB = std::cos(phi) * std::cos(phi);
  EXPECT_LT(std::abs(std::polar(1.0, -2 * aA * sol.t_star) + std::polar(1.0, -2 * aB * sol.t_star)), 1e-2);
}

TEST(PhaseTime, ResidualNonIncreasingInHorizon) {
  double prev = 1e9;
  for (double t_max : {5.0, 10.0, 20.0, 40.0, 80.0}) {
    try {
      find_phase_time(HbarFunction::quadratic(), kPi / 8, 1e-2, t_max);
      FAIL();
    } catch (const PhaseTimeNotFound& e) {
      EXPECT_LE(e.best_residual(), prev + 1e-12) << t_max;
      prev = e.best_residual();
    }
  }
}

TEST(PhaseTime, RejectsBadArguments) {
  EXPECT_THROW(find_phase_time(HbarFunction::quadratic(), 0.0, 1e-2, 10.0), std::invalid_argument);
  EXPECT_THROW(find_phase_time(HbarFunction::quadratic(), kPi / 8, 0.0, 10.0), std::invalid_argument);
}
