#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "nlqc/random.hpp"
#include "nlqc/types.hpp"

namespace nlqc {

// Outcome of a projective measurement on a subset of qubits. Bit j of
// `outcome_bits`, counted from the most significant end of a pattern of
// width `measured_qubits.size()`, belongs to measured_qubits[j].
struct MeasurementRecord {
  std::vector<QubitIndex> measured_qubits;
  std::uint64_t outcome_bits = 0;
  double outcome_probability = 0.0;
};

// Normalized state of one qubit conditioned on a computational-basis pattern
// of all the others. `empty` is set when the branch carries no weight, in
// which case c0 = c1 = 0.
struct ConditionalQubitState {
  double branch_weight = 0.0;
  Amplitude c0{};
  Amplitude c1{};
  bool empty = true;
};

// Local map used by the preferred-basis prescription: receives the normalized
// conditional state of the target qubits and returns its image.
using LocalStateMap = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

inline constexpr double kBranchWeightThreshold = 1e-14;

// Dense statevector over n qubits. Qubit 0 is the most significant bit of the
// basis index, so |i, f⟩ reads left to right.
class StateVector {
 public:
  explicit StateVector(std::size_t num_qubits);

  static StateVector basis(std::size_t num_qubits, std::uint64_t basis_index);
  // Amplitudes must have power-of-two length and unit norm within 1e-10.
  static StateVector from_amplitudes(std::vector<Amplitude> amplitudes);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  std::span<const Amplitude> amplitudes() const { return amplitudes_; }
  const Amplitude& operator[](std::size_t i) const { return amplitudes_[i]; }

  double norm_squared() const;

  void apply_1q(QubitIndex q, const Mat2& u);
  // Applies u on the ordered pair (q1, q2); q1 is the high bit of u's index.
  void apply_2q(QubitIndex q1, QubitIndex q2, const Mat4& u);

  double probability_of_pattern(std::span<const QubitIndex> qs, std::uint64_t bits) const;
  MeasurementRecord measure(std::span<const QubitIndex> qs, RandomSource& rng);

  // `other_bits` enumerates every qubit except `target`, in increasing qubit
  // order, most significant first.
  ConditionalQubitState conditional_qubit_state(QubitIndex target, std::uint64_t other_bits) const;

  // Preferred-basis prescription: for every computational-basis pattern of
  // the non-target qubits whose branch weight is at least `threshold`, the
  // normalized conditional state of `targets` is replaced by fn(state) and
  // re-embedded with the branch weight unchanged. Lighter branches are left
  // untouched. Returns the number of branches mapped.
  std::size_t map_conditional(std::span<const QubitIndex> targets, const LocalStateMap& fn,
                              double threshold = kBranchWeightThreshold);

  // Reduced density matrix of a single qubit.
  Mat2 reduced_density_matrix(QubitIndex q) const;

  // |<this|other>|^2
  double fidelity(const StateVector& other) const;
  Amplitude inner_product(const StateVector& other) const;

 private:
  StateVector(std::size_t num_qubits, std::vector<Amplitude> amplitudes);

  std::size_t bit_of(QubitIndex q) const;
  void check_qubit(QubitIndex q) const;

  std::size_t num_qubits_;
  std::vector<Amplitude> amplitudes_;
};

// R(phi): |0> -> cos(phi)|0> - sin(phi)|1>, |1> -> sin(phi)|0> + cos(phi)|1>.
Mat2 rotation(double phi);
// Bloch-sphere rotation about y by `angle`.
Mat2 ry(double angle);
Mat2 hadamard();
Mat2 pauli_x();
Mat2 pauli_z();

// The two-qubit unitary that sends the three pair states used by the
// nonlinear AND construction onto |00>, |01> and a uniform superposition.
Mat4 and_basis_change();

Mat4 kron(const Mat2& a, const Mat2& b);

}  // namespace nlqc
