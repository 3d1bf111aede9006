#include "nlqc/nonlinear_map.hpp"

#include <cmath>
#include <stdexcept>

namespace nlqc {

double StretchMap::image_lower() const { return theta0 - std::exp(lambda) * eta / 2; }
double StretchMap::image_upper() const { return theta0 + std::exp(lambda) * eta / 2; }

void StretchMap::validate() const {
  if (!std::isfinite(theta0) || !std::isfinite(eta) || !std::isfinite(lambda)) {
    throw std::invalid_argument("stretch map: non-finite parameter");
  }
  if (!(eta > 0.0)) throw std::invalid_argument("stretch map: eta must be positive");
  if (!(lower_edge() > 0.0 && upper_edge() < kPi)) {
    throw std::invalid_argument("stretch map: active region must lie strictly inside (0, pi)");
  }
  if (!(image_lower() > 0.0 && image_upper() < kPi)) {
    throw std::invalid_argument("stretch map: stretched region leaves (0, pi); lower lambda or eta");
  }
}

double StretchMap::max_lambda() const {
  return std::log(std::min(theta0, kPi - theta0) / (eta / 2));
}

double stretch_polar(double theta, const StretchMap& m) {
  const double lo = m.lower_edge();
  const double hi = m.upper_edge();
  if (theta < lo) return theta * m.image_lower() / lo;
  if (theta > hi) return kPi - (kPi - theta) * (kPi - m.image_upper()) / (kPi - hi);
  return m.theta0 + std::exp(m.lambda) * (theta - m.theta0);
}

BlochAngle stretch_apply(const BlochAngle& angle, const StretchMap& m) {
  m.validate();
  return {stretch_polar(angle.theta, m), angle.phi_az};
}

QubitAmplitudePair stretch_apply(const QubitAmplitudePair& q, const StretchMap& m) {
  m.validate();
  const double n = std::sqrt(q.norm());
  if (!(n > 0.0)) throw std::invalid_argument("stretch: zero-norm state");
  const double theta = 2 * std::atan2(std::abs(q.c2), std::abs(q.c1));
  const double out = stretch_polar(theta, m);
  // Keep each component's phase; a vanishing component borrows the other's
  // so that the azimuth stays defined.
  double p1 = std::arg(q.c1);
  double p2 = std::arg(q.c2);
  if (std::abs(q.c1) == 0.0) p1 = p2;
  if (std::abs(q.c2) == 0.0) p2 = p1;
  return {std::polar(n * std::cos(out / 2), p1), std::polar(n * std::sin(out / 2), p2)};
}

NonlinearMap& NonlinearMap::then_unitary(const Mat2& u, std::string label) {
  if (!is_unitary(u)) throw std::invalid_argument("NonlinearMap: stage matrix is not unitary");
  stages_.push_back(UnitaryStage{u, std::move(label)});
  return *this;
}

NonlinearMap& NonlinearMap::then_evolve(const HbarFunction& h, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("NonlinearMap: evolution time must be finite and >= 0");
  stages_.push_back(WeinbergStage{h, t});
  return *this;
}

NonlinearMap& NonlinearMap::then_stretch(const StretchMap& m) {
  m.validate();
  stages_.push_back(StretchStage{m});
  return *this;
}

NonlinearMap& NonlinearMap::prepend_unitary(const Mat2& u, std::string label) {
  if (!is_unitary(u)) throw std::invalid_argument("NonlinearMap: stage matrix is not unitary");
  stages_.insert(stages_.begin(), UnitaryStage{u, std::move(label)});
  return *this;
}

QubitAmplitudePair NonlinearMap::operator()(const QubitAmplitudePair& q) const {
  QubitAmplitudePair v = q;
  for (const auto& stage : stages_) {
    if (const auto* u = std::get_if<UnitaryStage>(&stage)) {
      v = apply_unitary(u->u, v);
    } else if (const auto* w = std::get_if<WeinbergStage>(&stage)) {
      v = evolve_closed_form(v, w->h, w->t);
    } else {
      v = stretch_apply(v, std::get<StretchStage>(stage).m);
    }
  }
  return v;
}

std::size_t NonlinearMap::evolution_count() const {
  std::size_t n = 0;
  for (const auto& s : stages_) n += std::holds_alternative<WeinbergStage>(s) ? 1 : 0;
  return n;
}

double NonlinearMap::total_evolution_time() const {
  double t = 0.0;
  for (const auto& s : stages_) {
    if (const auto* w = std::get_if<WeinbergStage>(&s)) t += w->t;
  }
  return t;
}

std::size_t apply_conditional_nonlinear(StateVector& state, QubitIndex target, const NonlinearMap& map,
                                        double threshold) {
  return apply_conditional_nonlinear(
      state, target, [&map](const QubitAmplitudePair& q) { return map(q); }, threshold);
}

}  // namespace nlqc
