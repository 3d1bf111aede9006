#include "nlqc/ngate.hpp"

#include <algorithm>
#include <cmath>

namespace nlqc {

namespace {

Vec4 vec(double a, double b, double c, double d) {
  Vec4 v;
  v << a, b, c, d;
  return v / std::sqrt(2.0);
}

double fidelity4(const Vec4& a, const Vec4& b) { return std::norm(a.dot(b)); }

}  // namespace

std::array<NCase, 3> n_gate_cases() {
  return {NCase{"a", vec(1, 0, 0, 1), vec(0, 1, 0, 1)},
          NCase{"b", vec(0, 1, 1, 0), vec(0, 1, 0, 1)},
          NCase{"c", vec(1, 0, 1, 0), vec(1, 0, 1, 0)}};
}

Vec4 apply_flag_conditional(const Vec4& psi, const NonlinearMap& m, double threshold) {
  Vec4 out = psi;
  for (int b = 0; b < 2; ++b) {
    const double w = std::norm(psi[2 * b]) + std::norm(psi[2 * b + 1]);
    if (w < threshold) continue;
    const double s = std::sqrt(w);
    const auto img = m(QubitAmplitudePair{psi[2 * b] / s, psi[2 * b + 1] / s});
    out[2 * b] = s * img.c1;
    out[2 * b + 1] = s * img.c2;
  }
  return out;
}

Mat4 minimal_rotation(const Vec4& a_in, const Vec4& b_in) {
  const Vec4 a = a_in.normalized();
  Vec4 b = b_in.normalized();
  const Amplitude c = a.dot(b);
  if (std::abs(c) > 1e-15) b *= std::polar(1.0, -std::arg(c));
  const double cr = std::clamp(a.dot(b).real(), -1.0, 1.0);
  Vec4 e2 = b - cr * a;
  const double nn = e2.norm();
  if (nn < 1e-15) return Mat4::Identity();
  e2 /= nn;
  const double th = std::acos(cr);
  const Mat4 paa = a * a.adjoint();
  const Mat4 pee = e2 * e2.adjoint();
  return Mat4::Identity() + (std::cos(th) - 1.0) * (paa + pee) + std::sin(th) * (e2 * a.adjoint() - a * e2.adjoint());
}

CompositeNGate::CompositeNGate(const HbarFunction& h, double eps)
    : h_(h), eps_(eps), n_minus_(build_n_minus(h, eps)) {
  // Image of case (c) after basis change and n-minus.
  const auto cases = n_gate_cases();
  image_a_ = apply_flag_conditional(and_basis_change() * cases[2].input, n_minus_.map);

  Vec4 rest = image_a_;
  rest[0] = 0.0;
  if (rest.norm() < 1e-12) throw SynthesisError("corrective", "image has no weight outside |00>");
  rest.normalize();
  Vec4 target = Vec4::Zero();
  target[1] = (std::abs(rest[1]) > 1e-15) ? std::polar(1.0, std::arg(rest[1])) : Amplitude(1.0);
  corrective_ = minimal_rotation(rest, target);
  const Vec4 fixed = corrective_ * image_a_;
  if (std::max(std::abs(fixed[2]), std::abs(fixed[3])) > 1e-9) {
    throw SynthesisError("corrective", "index qubit not returned to |0>");
  }
  x_ = fixed[0];
  y_ = fixed[1];
  const double n = std::sqrt(std::norm(x_) + std::norm(y_));
  x_ /= n;
  y_ /= n;

  try {
    n_plus_ = build_n_plus(h, x_, y_, eps);
  } catch (const SynthesisError&) {
    throw;
  } catch (const std::exception& e) {
    throw SynthesisError("n-plus", e.what());
  }

  const Vec4 out_a = run(cases[0].input, kStageCount - 1);
  const Vec4 out_c = run(cases[2].input, kStageCount - 1);
  phase_ = Mat4::Identity();
  const Amplitude pc = cases[2].target.dot(out_c);
  const Amplitude pa = cases[0].target.dot(out_a);
  phase_(0, 0) = phase_(2, 2) = std::polar(1.0, -std::arg(pc));
  phase_(1, 1) = phase_(3, 3) = std::polar(1.0, -std::arg(pa));

  stages_ = {
      {"basis-change", "unitary2", and_basis_change(), 0, 0.0},
      {"n-minus", "nonlinear-flag", Mat4::Identity(), n_minus_.map.evolution_count(), n_minus_.map.total_evolution_time()},
      {"corrective", "unitary2", corrective_, 0, 0.0},
      {"n-plus", "nonlinear-flag", Mat4::Identity(), n_plus_.map.evolution_count(), n_plus_.map.total_evolution_time()},
      {"not-flag", "unitary2", kron(Mat2::Identity(), pauli_x()), 0, 0.0},
      {"index-rotation", "unitary2", kron(rotation(-kPi / 4), Mat2::Identity()), 0, 0.0},
      {"phase-align", "unitary2", phase_, 0, 0.0},
  };

  for (std::size_t k = 0; k < cases.size(); ++k) {
    const Vec4 out = apply(cases[k].input);
    results_[k] = {cases[k].name, fidelity4(cases[k].target, out), (out - cases[k].target).cwiseAbs().maxCoeff()};
  }
}

Vec4 CompositeNGate::run(const Vec4& psi, std::size_t stages) const {
  Vec4 s = psi;
  if (stages > 0) s = and_basis_change() * s;
  if (stages > 1) s = apply_flag_conditional(s, n_minus_.map);
  if (stages > 2) s = corrective_ * s;
  if (stages > 3) s = apply_flag_conditional(s, n_plus_.map);
  if (stages > 4) s = kron(Mat2::Identity(), pauli_x()) * s;
  if (stages > 5) s = kron(rotation(-kPi / 4), Mat2::Identity()) * s;
  if (stages > 6) s = phase_ * s;
  return s;
}

Vec4 CompositeNGate::apply(const Vec4& psi) const { return run(psi, kStageCount); }

Vec4 CompositeNGate::apply_prefix(const Vec4& psi, std::size_t stages) const {
  return run(psi, std::min(stages, kStageCount));
}

double CompositeNGate::min_fidelity() const {
  double m = 1.0;
  for (const auto& r : results_) m = std::min(m, r.fidelity);
  return m;
}

CompositeNGate build_N(const HbarFunction& h, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("build_N: eps must be positive");
  return CompositeNGate(h, eps);
}

Vec4 n_table_apply(const Vec4& psi) {
  double w[2];
  double p[2];
  for (int i = 0; i < 2; ++i) {
    w[i] = std::norm(psi[2 * i]) + std::norm(psi[2 * i + 1]);
    p[i] = (w[i] > 0.0) ? std::norm(psi[2 * i + 1]) / w[i] : 0.0;
  }
  const double q = std::clamp(1.0 - (1.0 - p[0]) * (1.0 - p[1]), 0.0, 1.0);
  Vec4 out = Vec4::Zero();
  for (int i = 0; i < 2; ++i) {
    if (w[i] <= 0.0) continue;
    const Amplitude dom = (std::abs(psi[2 * i + 1]) > std::abs(psi[2 * i])) ? psi[2 * i + 1] : psi[2 * i];
    const Amplitude ph = std::polar(std::sqrt(w[i]), std::arg(dom));
    out[2 * i] = ph * std::sqrt(1.0 - q);
    out[2 * i + 1] = ph * std::sqrt(q);
  }
  return out;
}

}  // namespace nlqc
