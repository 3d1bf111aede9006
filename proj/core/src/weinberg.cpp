#include "nlqc/weinberg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlqc {

namespace {

constexpr double kRangeSlack = 1e-12;
constexpr std::size_t kMaxGridPoints = 400'000'000;
constexpr double kInvPhi = 0.6180339887498949;

double clamp_a(double a) {
  if (!(a >= -kRangeSlack && a <= 1.0 + kRangeSlack)) {
    throw std::domain_error("hbar: a = " + std::to_string(a) + " outside [0, 1]");
  }
  return std::clamp(a, 0.0, 1.0);
}

QubitAmplitudePair rhs(const HbarFunction& h, const QubitAmplitudePair& q) {
  const auto w = omega12(h, q.a());
  const Amplitude mi{0.0, -1.0};
  return {mi * w.omega1 * q.c1, mi * w.omega2 * q.c2};
}

QubitAmplitudePair axpy(const QubitAmplitudePair& x, double s, const QubitAmplitudePair& d) {
  return {x.c1 + s * d.c1, x.c2 + s * d.c2};
}

double pair_distance(const QubitAmplitudePair& x, const QubitAmplitudePair& y) {
  return std::max(std::abs(x.c1 - y.c1), std::abs(x.c2 - y.c2));
}

}  // namespace

HbarFunction::HbarFunction(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) throw std::invalid_argument("HbarFunction: no coefficients");
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw std::invalid_argument("HbarFunction: non-finite coefficient");
  }
}

double HbarFunction::value(double a) const {
  a = clamp_a(a);
  double v = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * a + *it;
  return v;
}

double HbarFunction::derivative(double a) const {
  a = clamp_a(a);
  double v = 0.0;
  for (std::size_t k = coeffs_.size() - 1; k >= 1; --k) v = v * a + static_cast<double>(k) * coeffs_[k];
  return v;
}

std::string HbarFunction::to_string() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) os << (k ? "," : "") << coeffs_[k];
  return os.str();
}

HbarFunction parse_hbar(const std::string& text) {
  std::vector<double> c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("hbar: bad coefficient '" + item + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw std::invalid_argument("hbar: bad coefficient '" + item + "'");
    c.push_back(v);
  }
  return HbarFunction(std::move(c));
}

Omega12 omega12(const HbarFunction& h, double a) {
  const double hb = h.value(a);
  const double dh = h.derivative(a);
  return {hb - a * dh, hb + (1.0 - a) * dh};
}

QubitAmplitudePair evolve_closed_form(const QubitAmplitudePair& q, const HbarFunction& h, double t) {
  if (!(q.norm() > 0.0)) throw std::invalid_argument("evolve_closed_form: zero-norm input");
  const auto w = omega12(h, q.a());
  return {q.c1 * std::polar(1.0, -w.omega1 * t), q.c2 * std::polar(1.0, -w.omega2 * t)};
}

QubitAmplitudePair evolve_integrated(const QubitAmplitudePair& q, const HbarFunction& h, double t,
                                     double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("evolve_integrated: dt must be positive");
  if (!(t >= 0.0)) throw std::invalid_argument("evolve_integrated: t must be non-negative");
  if (!(q.norm() > 0.0)) throw std::invalid_argument("evolve_integrated: zero-norm input");
  const double steps_f = std::ceil(t / dt - 1e-9);
  if (steps_f > static_cast<double>(kMaxIntegratorSteps)) {
    throw std::length_error("evolve_integrated: step count exceeds " + std::to_string(kMaxIntegratorSteps));
  }
  const auto steps = static_cast<std::size_t>(std::max(0.0, steps_f));
  QubitAmplitudePair y = q;
  double done = 0.0;
  for (std::size_t s = 0; s < steps; ++s) {
    const double step = std::min(dt, t - done);
    const auto k1 = rhs(h, y);
    const auto k2 = rhs(h, axpy(y, step / 2, k1));
    const auto k3 = rhs(h, axpy(y, step / 2, k2));
    const auto k4 = rhs(h, axpy(y, step, k3));
    y.c1 += step / 6 * (k1.c1 + 2.0 * k2.c1 + 2.0 * k3.c1 + k4.c1);
    y.c2 += step / 6 * (k1.c2 + 2.0 * k2.c2 + 2.0 * k3.c2 + k4.c2);
    done += step;
  }
  return y;
}

double hamiltonian_value(const HbarFunction& h, const QubitAmplitudePair& q) {
  const double n = q.norm();
  if (n == 0.0) return 0.0;
  return n * h.value(q.a());
}

double homogeneity_check(const HamiltonianFunction& h, const QubitAmplitudePair& q, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("homogeneity_check: scale must be positive");
  const QubitAmplitudePair scaled{scale * q.c1, scale * q.c2};
  return std::abs(h(scaled) - scale * scale * h(q));
}

double homogeneity_check(const HbarFunction& h, const QubitAmplitudePair& q, double scale) {
  return homogeneity_check([&h](const QubitAmplitudePair& p) { return hamiltonian_value(h, p); }, q, scale);
}

std::size_t apply_conditional_nonlinear(StateVector& state, QubitIndex target, const QubitMap& map,
                                        double threshold) {
  const QubitIndex targets[] = {target};
  return state.map_conditional(
      targets,
      [&map](const Eigen::VectorXcd& v) {
        const auto out = map(QubitAmplitudePair{v[0], v[1]});
        Eigen::VectorXcd r(2);
        r << out.c1, out.c2;
        return r;
      },
      threshold);
}

PhaseTimeNotFound::PhaseTimeNotFound(double t_max, double best_residual, double best_t)
    : std::runtime_error("no phase time within t_max = " + std::to_string(t_max) +
                         " (best residual " + std::to_string(best_residual) + " at t = " +
                         std::to_string(best_t) + ")"),
      t_max_(t_max),
      best_residual_(best_residual),
      best_t_(best_t) {}

double phase_residual(const HbarFunction& h, double phi, double t, PhaseCondition cond) {
  const double aA = std::sin(phi) * std::sin(phi);
  const double aB = std::cos(phi) * std::cos(phi);
  if (cond == PhaseCondition::Relative) {
    const double d = (h.derivative(aA) - h.derivative(aB)) * t;
    return std::abs(std::polar(1.0, -d) + 1.0);
  }
  const auto wA = omega12(h, aA);
  const auto wB = omega12(h, aB);
  const double r1 = std::abs(std::polar(1.0, -wA.omega1 * t) - 1.0);
  const double r2 = std::abs(std::polar(1.0, -wA.omega2 * t) + 1.0);
  const double r3 = std::abs(std::polar(1.0, -wB.omega1 * t) - 1.0);
  const double r4 = std::abs(std::polar(1.0, -wB.omega2 * t) - 1.0);
  return std::max({r1, r2, r3, r4});
}

PhaseTargetSolution find_phase_time(const HbarFunction& h, double phi, double eps, double t_max,
                                    PhaseCondition cond) {
  if (!(phi > 0.0 && phi < kPi / 4)) throw std::invalid_argument("find_phase_time: phi must be in (0, pi/4)");
  if (!(eps > 0.0)) throw std::invalid_argument("find_phase_time: eps must be positive");
  if (!(t_max >= 0.0)) throw std::invalid_argument("find_phase_time: t_max must be non-negative");

  const double aA = std::sin(phi) * std::sin(phi);
  const double aB = std::cos(phi) * std::cos(phi);
  auto residual = [&](double t) { return phase_residual(h, phi, t, cond); };
  auto finish = [&](double t) {
    PhaseTargetSolution sol{t, residual(t), phi, cond, 0.0};
    if (cond == PhaseCondition::Relative) {
      sol.z_correction = std::remainder(h.derivative(aB) * t, 2 * kPi);
    }
    return sol;
  };

  if (residual(0.0) <= eps) return finish(0.0);

  double span = 0.0;
  if (cond == PhaseCondition::Relative) {
    span = std::abs(h.derivative(aA) - h.derivative(aB));
    if (span > 0.0) {
      const double t = kPi / span;
      if (t <= t_max) return finish(t);
    }
    const double t_best = (span > 0.0) ? std::min(t_max, kPi / span) : 0.0;
    throw PhaseTimeNotFound(t_max, residual(t_best), t_best);
  }

  const auto wA = omega12(h, aA);
  const auto wB = omega12(h, aB);
  span = std::max({std::abs(wA.omega1), std::abs(wA.omega2), std::abs(wB.omega1), std::abs(wB.omega2)});
  if (span == 0.0) throw PhaseTimeNotFound(t_max, residual(0.0), 0.0);

  const double step = eps / (10.0 * span);
  const double points = std::floor(t_max / step);
  if (points > static_cast<double>(kMaxGridPoints)) {
    throw std::invalid_argument("find_phase_time: grid of " + std::to_string(points) +
                                " points is too dense; raise eps or lower t_max");
  }
  const auto count = static_cast<std::size_t>(points);

  auto golden = [&](double lo, double hi) {
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = residual(x1);
    double f2 = residual(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kInvPhi * (hi - lo);
        f1 = residual(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kInvPhi * (hi - lo);
        f2 = residual(x2);
      }
    }
    return (f1 <= f2) ? x1 : x2;
  };

  double best_t = 0.0;
  double best_r = residual(0.0);
  double prev = best_r;
  double cur = residual(std::min(step, t_max));
  for (std::size_t i = 1; i <= count; ++i) {
    const double t = static_cast<double>(i) * step;
    const double next = (i < count) ? residual(t + step) : residual(t_max);
    if (cur <= prev && cur <= next) {
      double t_ref = t;
      double r_ref = cur;
      // The residual is span-Lipschitz, so a bracket cannot dip below this.
      if (cur - span * step <= std::min(eps, best_r)) {
        t_ref = golden(t - step, std::min(t + step, t_max));
        r_ref = residual(t_ref);
        if (r_ref > cur) {
          t_ref = t;
          r_ref = cur;
        }
      }
      if (r_ref < best_r) {
        best_r = r_ref;
        best_t = t_ref;
      }
      if (best_r <= eps) return finish(best_t);
    } else if (cur < best_r) {
      best_r = cur;
      best_t = t;
      if (best_r <= eps) return finish(best_t);
    }
    prev = cur;
    cur = next;
  }
  throw PhaseTimeNotFound(t_max, best_r, best_t);
}

std::vector<TrajectorySample> weinberg_trajectory(const QubitAmplitudePair& q0, const HbarFunction& h,
                                                  double t_end, std::size_t samples, double dt) {
  if (samples < 1) throw std::invalid_argument("trajectory: need at least one sample");
  if (!(t_end >= 0.0)) throw std::invalid_argument("trajectory: t_end must be non-negative");
  if (samples == 1 && t_end != 0.0) throw std::invalid_argument("trajectory: one sample requires t_end = 0");
  std::vector<TrajectorySample> out;
  out.reserve(samples);
  QubitAmplitudePair integ = q0;
  double t_prev = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = (samples == 1) ? 0.0 : t_end * static_cast<double>(k) / static_cast<double>(samples - 1);
    integ = evolve_integrated(integ, h, t - t_prev, dt);
    t_prev = t;
    const auto closed = evolve_closed_form(q0, h, t);
    out.push_back({t, closed, pair_distance(closed, integ)});
  }
  return out;
}

}  // namespace nlqc
