#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nlqc/ngate.hpp"
#include "nlqc/nonlinear_map.hpp"
#include "nlqc/oracle.hpp"
#include "nlqc/random.hpp"

namespace nlqc {

// Gaussian jitter on gate parameters. sigma == 0 never touches the source.
class NoiseModel {
 public:
  NoiseModel(double sigma, RandomSource& rng);
  double sigma() const { return sigma_; }
  double perturb(double parameter);

 private:
  double sigma_;
  RandomSource* rng_;
};

// Probability that Step 3 yields 0...0: ((2^n - s)^2 + s^2) / 2^(2n).
double step3_success_probability(std::size_t n, std::uint64_t s);
// Polar angle of the post-measurement flag for s solutions out of 2^n.
double flag_polar_angle(std::size_t n, std::uint64_t s);

struct Alg1Config {
  std::size_t n = 0;
  StretchMap stretch{};
  std::size_t max_applications = 400;
  std::size_t max_trials = 16;  // ceil((pi/eta)^2) for the default eta
  std::size_t saturation_applications = 25;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  double decision_threshold = 0.75;

  static std::size_t default_trial_budget(double eta);
};

enum class GateMode { Table, Synthesized };

struct Alg2Config {
  std::size_t n = 0;
  GateMode gate_mode = GateMode::Table;
  // Used when gate_mode is Synthesized; built from hbar/eps when empty.
  std::shared_ptr<const CompositeNGate> gate;
  HbarFunction hbar = HbarFunction::quadratic();
  double eps = 1e-3;
  bool counting = false;
  std::size_t counter_width = 0;  // 0 selects n + 1
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

struct SeparationPoint {
  std::size_t iteration;
  double separation;
  bool in_region = false;  // both images inside the active region
};

// Per-application growth of the separation, fitted by least squares on
// log(separation) over the stretch of points that start inside the region.
// Empty when fewer than two usable points exist.
std::optional<double> fit_growth_factor(const std::vector<SeparationPoint>& trajectory);

struct RunReport {
  std::string algorithm;  // "alg1" or "alg2"
  std::string mode;       // "decide" or "count"
  std::optional<bool> decision;
  std::optional<std::uint64_t> count;
  std::uint64_t oracle_calls = 0;
  std::size_t trials_used = 0;
  std::size_t applications_used = 0;
  std::optional<std::size_t> applications_to_threshold;
  std::size_t rounds = 0;
  std::vector<SeparationPoint> separation_trajectory;
  double post_measurement_flag_amplitude = 0.0;
  std::vector<std::uint64_t> flag_census;
  double entanglement_residue = 0.0;
  bool succeeded = false;
  std::vector<std::string> notes;
};

RunReport run_algorithm1(const Alg1Config& cfg, OracleSpec& oracle);
RunReport run_algorithm1_count(const Alg1Config& cfg, OracleSpec& oracle);
RunReport run_algorithm2(const Alg2Config& cfg, OracleSpec& oracle);
RunReport run_algorithm2_count(const Alg2Config& cfg, OracleSpec& oracle);

inline constexpr double kCensusThreshold = 1e-8;

}  // namespace nlqc
