#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nlqc/nonlinear_map.hpp"
#include "nlqc/weinberg.hpp"

namespace nlqc {

class SynthesisError : public std::runtime_error {
 public:
  SynthesisError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// R(-phi) . Z(zeta) . E(t*) . R(phi); zeta is sol.z_correction (zero for an
// absolute solution).
QubitAmplitudePair n_minus_single_pass(const QubitAmplitudePair& q, double phi, const HbarFunction& h,
                                       const PhaseTargetSolution& sol, double tolerance = 1e-2);
NonlinearMap n_minus_single_pass_map(double phi, const HbarFunction& h, const PhaseTargetSolution& sol);

struct PassRecord {
  double phi;        // sandwich angle of the first pass, 0 for later passes
  double t;          // evolution time
  double distance_before;  // Bloch distance of the two images
  double distance_after;
};

struct NMinusGate {
  NonlinearMap map;
  std::vector<PassRecord> schedule;
  double eps = 0.0;
  double image_error_0 = 0.0;  // Bloch distance of map(|0>) to |0>
  double image_error_1 = 0.0;
};

inline constexpr double kDefaultContraction = 0.25;
inline constexpr std::size_t kMaxPasses = 200;
// n-minus amplifies input rounding by roughly pi/eps, so below this the
// images can no longer be resolved to eps in double precision.
inline constexpr double kMinSynthesisEps = 1e-7;

NMinusGate build_n_minus(const HbarFunction& h, double eps, double contraction = kDefaultContraction);

struct NPlusGate {
  NonlinearMap map;
  double t = 0.0;
  double eps = 0.0;
  double image_error_0 = 0.0;   // Bloch distance of map(|0>) to |0>
  double image_error_xy = 0.0;  // Bloch distance of map(x|0>+y|1>) to |1>
};

NPlusGate build_n_plus(const HbarFunction& h, Amplitude x, Amplitude y, double eps);

}  // namespace nlqc
