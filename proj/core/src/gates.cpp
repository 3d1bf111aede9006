#include "nlqc/gates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace nlqc {

namespace {

const QubitAmplitudePair kZero{1.0, 0.0};
const QubitAmplitudePair kOne{0.0, 1.0};

Mat2 z_phase(double zeta) {
  Mat2 z = Mat2::Identity();
  z(1, 1) = std::polar(1.0, zeta);
  return z;
}

double hav(double x) { return std::sin(x / 2) * std::sin(x / 2); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double polar_of(double theta) { return std::sin(theta / 2) * std::sin(theta / 2); }

}  // namespace

NonlinearMap n_minus_single_pass_map(double phi, const HbarFunction& h, const PhaseTargetSolution& sol) {
  NonlinearMap m;
  m.then_unitary(rotation(phi), "R(phi)").then_evolve(h, sol.t_star);
  if (sol.z_correction != 0.0) m.then_unitary(z_phase(sol.z_correction), "Z(zeta)");
  m.then_unitary(rotation(-phi), "R(-phi)");
  return m;
}

QubitAmplitudePair n_minus_single_pass(const QubitAmplitudePair& q, double phi, const HbarFunction& h,
                                       const PhaseTargetSolution& sol, double tolerance) {
  if (std::abs(sol.phi - phi) > 1e-12) throw std::invalid_argument("n_minus_single_pass: solution was found for a different phi");
  if (sol.residual > tolerance) throw std::invalid_argument("n_minus_single_pass: stale solution, residual above tolerance");
  return n_minus_single_pass_map(phi, h, sol)(q);
}

NMinusGate build_n_minus(const HbarFunction& h, double eps, double contraction) {
  if (!(eps > 0.0)) throw std::invalid_argument("build_n_minus: eps must be positive");
  if (!(contraction > 0.0 && contraction < 1.0)) throw std::invalid_argument("build_n_minus: contraction must be in (0, 1)");
  if (eps < kMinSynthesisEps) {
    throw SynthesisError("n-minus", "eps " + sci(eps) + " is below the synthesis floor " + sci(kMinSynthesisEps));
  }

  NMinusGate g;
  g.eps = eps;
  QubitAmplitudePair u = kZero;
  QubitAmplitudePair v = kOne;
  double d = kPi;
  while (d > eps) {
    if (g.schedule.size() >= kMaxPasses) throw SynthesisError("n-minus", "pass limit reached");
    const double target = std::max(0.9 * eps, d * contraction);
    const double th_u = kPi / 2 - target / 2;
    const double th_v = kPi / 2 + target / 2;
    const double rate = h.derivative(polar_of(th_v)) - h.derivative(polar_of(th_u));
    if (std::abs(rate) < 1e-14) throw SynthesisError("n-minus", "hbar has no curvature; images cannot be moved together");

    Mat2 place;
    double phi = 0.0;
    double t = 0.0;
    if (g.schedule.empty()) {
      phi = (kPi - target) / 4;
      PhaseTargetSolution sol;
      try {
        sol = find_phase_time(h, phi, 1e-12, 1e6, PhaseCondition::Relative);
      } catch (const PhaseTimeNotFound& e) {
        throw SynthesisError("n-minus pass 1", e.what());
      }
      place = rotation(phi);
      t = sol.t_star;
    } else {
      const double hav_gap = (hav(d) - hav(th_v - th_u)) / (std::sin(th_u) * std::sin(th_v));
      const double gap = 2 * std::asin(std::sqrt(std::clamp(hav_gap, 0.0, 1.0)));
      const double sg = rate > 0 ? 1.0 : -1.0;
      place = placement_unitary(bloch_vector(u), bloch_vector(v), bloch_vector(BlochAngle{th_u, -sg * gap / 2}),
                                bloch_vector(BlochAngle{th_v, sg * gap / 2}));
      t = gap / std::abs(rate);
    }
    g.map.then_unitary(place, "place").then_evolve(h, t);
    u = evolve_closed_form(apply_unitary(place, u), h, t);
    v = evolve_closed_form(apply_unitary(place, v), h, t);
    const double after = bloch_distance(u, v);
    if (after > target + 0.5 * (d - target)) {
      throw SynthesisError("n-minus pass " + std::to_string(g.schedule.size() + 1),
                           "separation stalled at " + sci(after) + " (requested eps " + sci(eps) +
                               " is below the numerical floor)");
    }
    g.schedule.push_back({phi, t, d, after});
    d = after;
  }

  const Eigen::Vector3d mid = bloch_vector(u) + bloch_vector(v);
  g.map.then_unitary(rotate_to_north(mid), "centre");

  const auto u0 = g.map(kZero);
  const auto u1 = g.map(kOne);
  const Amplitude overlap = std::conj(u1.c1) * u0.c1 + std::conj(u1.c2) * u0.c2;
  g.map.prepend_unitary(z_phase(std::arg(overlap)), "align");

  g.image_error_0 = bloch_distance(g.map(kZero), kZero);
  g.image_error_1 = bloch_distance(g.map(kOne), kZero);
  if (std::max(g.image_error_0, g.image_error_1) > eps) {
    throw SynthesisError("n-minus", "images miss |0> by " + sci(std::max(g.image_error_0, g.image_error_1)));
  }
  return g;
}

NPlusGate build_n_plus(const HbarFunction& h, Amplitude x, Amplitude y, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("build_n_plus: eps must be positive");
  if (eps < kMinSynthesisEps) {
    throw SynthesisError("n-plus", "eps " + sci(eps) + " is below the synthesis floor " + sci(kMinSynthesisEps));
  }
  const QubitAmplitudePair w{x, y};
  if (std::abs(w.norm() - 1.0) > 1e-9) throw std::invalid_argument("build_n_plus: (x, y) is not normalized");
  const double d = bloch_distance(kZero, w);
  if (d <= eps) throw SynthesisError("n-plus", "(x, y) lies within eps of |0>");

  NPlusGate g;
  g.eps = eps;
  if (d < kPi - 1e-12) {
    const double th_u = (kPi - d) / 2;
    const double th_v = (kPi + d) / 2;
    const double rate = h.derivative(polar_of(th_v)) - h.derivative(polar_of(th_u));
    if (std::abs(rate) < 1e-14) throw SynthesisError("n-plus", "hbar has no curvature; images cannot be moved apart");
    const Mat2 place = placement_unitary(bloch_vector(kZero), bloch_vector(w), bloch_vector(BlochAngle{th_u, 0.0}),
                                         bloch_vector(BlochAngle{th_v, 0.0}));
    g.t = kPi / std::abs(rate);
    g.map.then_unitary(place, "place").then_evolve(h, g.t);
  }
  g.map.then_unitary(rotate_to_north(bloch_vector(g.map(kZero))), "pin");

  g.image_error_0 = bloch_distance(g.map(kZero), kZero);
  g.image_error_xy = bloch_distance(g.map(w), kOne);
  if (std::max(g.image_error_0, g.image_error_xy) > eps) {
    throw SynthesisError("n-plus", "image error " + sci(std::max(g.image_error_0, g.image_error_xy)));
  }
  return g;
}

}  // namespace nlqc
