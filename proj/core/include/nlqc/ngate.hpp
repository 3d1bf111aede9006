#pragma once

#include <array>
#include <string>
#include <vector>

#include "nlqc/gates.hpp"
#include "nlqc/statevector.hpp"

namespace nlqc {

using Vec4 = Eigen::Vector4cd;

// Two-qubit states on (index, flag), index is the high bit.
struct NCase {
  std::string name;
  Vec4 input;
  Vec4 target;
};

// The three pair classes: (a) (|00>+|11>)/sqrt2, (b) (|01>+|10>)/sqrt2,
// (c) (|00>+|10>)/sqrt2, with their AND-like images.
std::array<NCase, 3> n_gate_cases();

struct NCaseResult {
  std::string name;
  double fidelity;
  double max_abs_error;
};

struct NStageInfo {
  std::string name;
  std::string kind;  // "unitary2", "nonlinear-flag"
  Mat4 matrix = Mat4::Identity();
  std::size_t evolutions = 0;
  double evolution_time = 0.0;
};

class CompositeNGate {
 public:
  // stage order: basis change, n-minus on flag, corrective unitary, n-plus on
  // flag, NOT on flag, index rotation R(-pi/4), flag phase alignment.
  CompositeNGate(const HbarFunction& h, double eps);

  Vec4 apply(const Vec4& psi) const;
  // Output of the first `stages` stages only.
  Vec4 apply_prefix(const Vec4& psi, std::size_t stages) const;

  double eps() const { return eps_; }
  const NMinusGate& n_minus() const { return n_minus_; }
  const NPlusGate& n_plus() const { return n_plus_; }
  const Vec4& image_a() const { return image_a_; }
  Amplitude x() const { return x_; }
  Amplitude y() const { return y_; }
  const std::vector<NStageInfo>& stages() const { return stages_; }
  const std::array<NCaseResult, 3>& case_results() const { return results_; }
  double min_fidelity() const;
  const HbarFunction& hbar() const { return h_; }

  static constexpr std::size_t kStageCount = 7;

 private:
  Vec4 run(const Vec4& psi, std::size_t stages) const;

  HbarFunction h_;
  double eps_;
  NMinusGate n_minus_;
  NPlusGate n_plus_;
  Mat4 corrective_ = Mat4::Identity();
  Mat4 phase_ = Mat4::Identity();
  Vec4 image_a_ = Vec4::Zero();
  Amplitude x_{};
  Amplitude y_{};
  std::vector<NStageInfo> stages_;
  std::array<NCaseResult, 3> results_;
};

CompositeNGate build_N(const HbarFunction& h, double eps);

// Exact table form of the gate: index weights are kept, the flag becomes
// |1> with probability 1 - (1-p0)(1-p1), p_i the flag-1 probability of index
// branch i. Reproduces the three cases exactly and is continuous between them.
Vec4 n_table_apply(const Vec4& psi);

// Minimal rotation in span{a, b} taking a to b (up to b's phase being
// matched to a's overlap), identity on the orthogonal complement.
Mat4 minimal_rotation(const Vec4& a, const Vec4& b);

// Single-qubit map on the flag (low bit) applied per index branch.
Vec4 apply_flag_conditional(const Vec4& psi, const NonlinearMap& m, double threshold = kBranchWeightThreshold);

}  // namespace nlqc
