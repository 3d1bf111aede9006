#pragma once

#include <string>
#include <variant>
#include <vector>

#include "nlqc/bloch.hpp"
#include "nlqc/weinberg.hpp"

namespace nlqc {

// Piecewise-linear polar-angle map. Inside [theta0 - eta/2, theta0 + eta/2]
// it stretches by e^lambda about theta0; the two outer pieces are squeezed
// linearly so that [0, pi] maps onto itself.
struct StretchMap {
  double theta0 = kPi / 2;
  double eta = kPi / 4;
  double lambda = 0.69314718055994531;  // ln 2

  double lower_edge() const { return theta0 - eta / 2; }
  double upper_edge() const { return theta0 + eta / 2; }
  double image_lower() const;
  double image_upper() const;
  bool in_region(double theta) const { return theta >= lower_edge() && theta <= upper_edge(); }
  // Throws std::invalid_argument if the region or its image leaves (0, pi).
  void validate() const;
  // Largest lambda for which the image of the region still fits in (0, pi).
  double max_lambda() const;
};

double stretch_polar(double theta, const StretchMap& m);
BlochAngle stretch_apply(const BlochAngle& angle, const StretchMap& m);
QubitAmplitudePair stretch_apply(const QubitAmplitudePair& q, const StretchMap& m);

struct UnitaryStage {
  Mat2 u;
  std::string label;
};

struct WeinbergStage {
  HbarFunction h;
  double t;
};

struct StretchStage {
  StretchMap m;
};

using MapStage = std::variant<UnitaryStage, WeinbergStage, StretchStage>;

// Ordered composition of single-qubit stages, first stage applied first.
// Every stage is norm preserving and commutes with global phase.
class NonlinearMap {
 public:
  NonlinearMap() = default;

  NonlinearMap& then_unitary(const Mat2& u, std::string label = {});
  NonlinearMap& then_evolve(const HbarFunction& h, double t);
  NonlinearMap& then_stretch(const StretchMap& m);
  NonlinearMap& prepend_unitary(const Mat2& u, std::string label = {});

  QubitAmplitudePair operator()(const QubitAmplitudePair& q) const;

  const std::vector<MapStage>& stages() const { return stages_; }
  std::size_t evolution_count() const;
  double total_evolution_time() const;

 private:
  std::vector<MapStage> stages_;
};

// Lifts a single-qubit map to `target` through the conditional prescription.
std::size_t apply_conditional_nonlinear(StateVector& state, QubitIndex target, const NonlinearMap& map,
                                        double threshold = kBranchWeightThreshold);

}  // namespace nlqc
