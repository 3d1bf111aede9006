#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlqc/statevector.hpp"
#include "nlqc/types.hpp"

namespace nlqc {

// hbar(a) = sum_k c_k a^k, a in [0, 1].
class HbarFunction {
 public:
  explicit HbarFunction(std::vector<double> coefficients);
  static HbarFunction linear(double kappa) { return HbarFunction({0.0, kappa}); }
  static HbarFunction quadratic() { return HbarFunction({0.0, 0.0, 1.0}); }

  const std::vector<double>& coefficients() const { return coeffs_; }
  std::size_t degree() const { return coeffs_.size() - 1; }

  double value(double a) const;
  double derivative(double a) const;

  std::string to_string() const;

 private:
  std::vector<double> coeffs_;
};

// HbarFunction from "c0,c1,..."
HbarFunction parse_hbar(const std::string& text);

struct Omega12 {
  double omega1;
  double omega2;
};

Omega12 omega12(const HbarFunction& h, double a);

// c1 multiplies |0>, c2 multiplies |1>.
struct QubitAmplitudePair {
  Amplitude c1{1.0, 0.0};
  Amplitude c2{};

  double norm() const { return std::norm(c1) + std::norm(c2); }
  double a() const { return std::norm(c2) / norm(); }
};

QubitAmplitudePair evolve_closed_form(const QubitAmplitudePair& q, const HbarFunction& h, double t);

inline constexpr std::size_t kMaxIntegratorSteps = 100'000'000;

// Fixed-step RK4 on d(psi_k)/dt = -i dh/d(psi_k*) with h = n hbar(a).
// The last step is shortened to land exactly on t.
QubitAmplitudePair evolve_integrated(const QubitAmplitudePair& q, const HbarFunction& h, double t,
                                     double dt);

// h as a function of the two amplitudes.
using HamiltonianFunction = std::function<double(const QubitAmplitudePair&)>;

double hamiltonian_value(const HbarFunction& h, const QubitAmplitudePair& q);
double homogeneity_check(const HamiltonianFunction& h, const QubitAmplitudePair& q, double scale);
double homogeneity_check(const HbarFunction& h, const QubitAmplitudePair& q, double scale);

// Preferred-basis prescription on one target qubit: each computational-basis
// branch of the other qubits is mapped independently.
using QubitMap = std::function<QubitAmplitudePair(const QubitAmplitudePair&)>;
std::size_t apply_conditional_nonlinear(StateVector& state, QubitIndex target, const QubitMap& map,
                                        double threshold = kBranchWeightThreshold);

// Absolute: alpha = gamma = delta = 1, beta = -1 with
//   alpha = exp(-i w1(aA) t), beta = exp(-i w2(aA) t),
//   gamma = exp(-i w1(aB) t), delta = exp(-i w2(aB) t),
//   aA = sin^2 phi, aB = cos^2 phi.
// Relative: only beta/alpha = -delta/gamma; leftover phases are removed by a
// diagonal correction afterwards.
enum class PhaseCondition { Absolute, Relative };

struct PhaseTargetSolution {
  double t_star = 0.0;
  double residual = 0.0;
  double phi = 0.0;
  PhaseCondition condition = PhaseCondition::Absolute;
  // Relative mode: the |1> phase that restores the absolute output rays.
  double z_correction = 0.0;
};

class PhaseTimeNotFound : public std::runtime_error {
 public:
  PhaseTimeNotFound(double t_max, double best_residual, double best_t);
  double t_max() const { return t_max_; }
  double best_residual() const { return best_residual_; }
  double best_t() const { return best_t_; }

 private:
  double t_max_;
  double best_residual_;
  double best_t_;
};

double phase_residual(const HbarFunction& h, double phi, double t, PhaseCondition cond);

PhaseTargetSolution find_phase_time(const HbarFunction& h, double phi, double eps, double t_max,
                                    PhaseCondition cond = PhaseCondition::Absolute);

struct TrajectorySample {
  double t;
  QubitAmplitudePair closed;
  double residual;  // max component distance to the integrator
};

std::vector<TrajectorySample> weinberg_trajectory(const QubitAmplitudePair& q0, const HbarFunction& h,
                                                  double t_end, std::size_t samples, double dt);

}  // namespace nlqc
