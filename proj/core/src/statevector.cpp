#include "nlqc/statevector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlqc {

namespace {

constexpr double kNormTolerance = 1e-10;

// Scatter the low bits of `value` into the positions set in `mask`.
std::uint64_t deposit(std::uint64_t value, std::uint64_t mask) {
  std::uint64_t out = 0;
  for (std::uint64_t bit = 1; mask != 0; bit <<= 1) {
    const std::uint64_t low = mask & (~mask + 1);
    if (value & bit) out |= low;
    mask &= mask - 1;
  }
  return out;
}

template <typename M>
bool unitary_check(const M& u, double tol) {
  const M prod = u * u.adjoint();
  const M eye = M::Identity();
  return ((prod - eye).cwiseAbs().maxCoeff() <= tol);
}

}  // namespace

bool is_unitary(const Mat2& u, double tol) { return unitary_check(u, tol); }
bool is_unitary(const Mat4& u, double tol) { return unitary_check(u, tol); }

StateVector::StateVector(std::size_t num_qubits) : StateVector(basis(num_qubits, 0)) {}

StateVector::StateVector(std::size_t num_qubits, std::vector<Amplitude> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {}

StateVector StateVector::basis(std::size_t num_qubits, std::uint64_t basis_index) {
  if (num_qubits < 1 || num_qubits > 30) {
    throw std::invalid_argument("StateVector: num_qubits must be in [1, 30], got " +
                                std::to_string(num_qubits));
  }
  const std::uint64_t dim = std::uint64_t{1} << num_qubits;
  if (basis_index >= dim) {
    throw std::out_of_range("StateVector: basis index " + std::to_string(basis_index) +
                            " out of range for " + std::to_string(num_qubits) + " qubits");
  }
  std::vector<Amplitude> amps(dim);
  amps[basis_index] = 1.0;
  return StateVector(num_qubits, std::move(amps));
}

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amplitudes) {
  const std::size_t dim = amplitudes.size();
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("StateVector: amplitude count must be a power of two >= 2");
  }
  double norm = 0.0;
  for (const auto& a : amplitudes) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw std::invalid_argument("StateVector: non-finite amplitude");
    }
    norm += std::norm(a);
  }
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw std::invalid_argument("StateVector: amplitudes not normalized (norm^2 = " +
                                std::to_string(norm) + ")");
  }
  std::size_t n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  return StateVector(n, std::move(amplitudes));
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return s;
}

std::size_t StateVector::bit_of(QubitIndex q) const { return num_qubits_ - 1 - q.value; }

void StateVector::check_qubit(QubitIndex q) const {
  if (q.value >= num_qubits_) {
    throw std::out_of_range("qubit index " + std::to_string(q.value) + " out of range for " +
                            std::to_string(num_qubits_) + " qubits");
  }
}

void StateVector::apply_1q(QubitIndex q, const Mat2& u) {
  check_qubit(q);
  if (!is_unitary(u)) throw std::invalid_argument("apply_1q: matrix is not unitary");
  const std::uint64_t stride = std::uint64_t{1} << bit_of(q);
  const std::uint64_t dim = amplitudes_.size();
  for (std::uint64_t base = 0; base < dim; base += 2 * stride) {
    for (std::uint64_t off = 0; off < stride; ++off) {
      const std::uint64_t i0 = base + off;
      const std::uint64_t i1 = i0 + stride;
      const Amplitude a0 = amplitudes_[i0];
      const Amplitude a1 = amplitudes_[i1];
      amplitudes_[i0] = u(0, 0) * a0 + u(0, 1) * a1;
      amplitudes_[i1] = u(1, 0) * a0 + u(1, 1) * a1;
    }
  }
}

void StateVector::apply_2q(QubitIndex q1, QubitIndex q2, const Mat4& u) {
  check_qubit(q1);
  check_qubit(q2);
  if (q1 == q2) throw std::invalid_argument("apply_2q: qubits must differ");
  if (!is_unitary(u)) throw std::invalid_argument("apply_2q: matrix is not unitary");
  const std::uint64_t m1 = std::uint64_t{1} << bit_of(q1);
  const std::uint64_t m2 = std::uint64_t{1} << bit_of(q2);
  const std::uint64_t rest_mask = (std::uint64_t{amplitudes_.size()} - 1) & ~(m1 | m2);
  const std::uint64_t branches = amplitudes_.size() / 4;
  for (std::uint64_t r = 0; r < branches; ++r) {
    const std::uint64_t base = deposit(r, rest_mask);
    const std::uint64_t idx[4] = {base, base | m2, base | m1, base | m1 | m2};
    Eigen::Vector4cd v;
    for (int k = 0; k < 4; ++k) v[k] = amplitudes_[idx[k]];
    const Eigen::Vector4cd w = u * v;
    for (int k = 0; k < 4; ++k) amplitudes_[idx[k]] = w[k];
  }
}

double StateVector::probability_of_pattern(std::span<const QubitIndex> qs,
                                           std::uint64_t bits) const {
  std::uint64_t mask = 0;
  std::uint64_t want = 0;
  const std::size_t k = qs.size();
  for (std::size_t j = 0; j < k; ++j) {
    check_qubit(qs[j]);
    const std::uint64_t m = std::uint64_t{1} << bit_of(qs[j]);
    if (mask & m) throw std::invalid_argument("probability_of_pattern: repeated qubit");
    mask |= m;
    if ((bits >> (k - 1 - j)) & 1) want |= m;
  }
  double p = 0.0;
  for (std::uint64_t i = 0; i < amplitudes_.size(); ++i) {
    if ((i & mask) == want) p += std::norm(amplitudes_[i]);
  }
  return p;
}

MeasurementRecord StateVector::measure(std::span<const QubitIndex> qs, RandomSource& rng) {
  if (qs.empty()) throw std::invalid_argument("measure: no qubits given");
  const std::size_t k = qs.size();
  std::vector<std::uint64_t> masks(k);
  std::uint64_t all = 0;
  for (std::size_t j = 0; j < k; ++j) {
    check_qubit(qs[j]);
    masks[j] = std::uint64_t{1} << bit_of(qs[j]);
    if (all & masks[j]) throw std::invalid_argument("measure: repeated qubit");
    all |= masks[j];
  }
  auto pattern_of = [&](std::uint64_t i) {
    std::uint64_t p = 0;
    for (std::size_t j = 0; j < k; ++j) p = (p << 1) | ((i & masks[j]) ? 1 : 0);
    return p;
  };

  std::vector<double> probs(std::size_t{1} << k, 0.0);
  for (std::uint64_t i = 0; i < amplitudes_.size(); ++i) probs[pattern_of(i)] += std::norm(amplitudes_[i]);

  const double u = rng.uniform() * norm_squared();
  std::uint64_t outcome = 0;
  double acc = 0.0;
  for (std::uint64_t p = 0; p < probs.size(); ++p) {
    if (probs[p] <= 0.0) continue;
    outcome = p;
    acc += probs[p];
    if (u < acc) break;
  }

  const double prob = probs[outcome];
  const double scale = 1.0 / std::sqrt(prob);
  for (std::uint64_t i = 0; i < amplitudes_.size(); ++i) {
    if (pattern_of(i) == outcome) {
      amplitudes_[i] *= scale;
    } else {
      amplitudes_[i] = 0.0;
    }
  }
  return MeasurementRecord{std::vector<QubitIndex>(qs.begin(), qs.end()), outcome, prob};
}

ConditionalQubitState StateVector::conditional_qubit_state(QubitIndex target,
                                                           std::uint64_t other_bits) const {
  check_qubit(target);
  if (num_qubits_ > 1 && other_bits >= (std::uint64_t{1} << (num_qubits_ - 1))) {
    throw std::out_of_range("conditional_qubit_state: pattern has too many bits");
  }
  const std::uint64_t m = std::uint64_t{1} << bit_of(target);
  const std::uint64_t rest_mask = (std::uint64_t{amplitudes_.size()} - 1) & ~m;
  const std::uint64_t base = deposit(other_bits, rest_mask);
  const Amplitude a0 = amplitudes_[base];
  const Amplitude a1 = amplitudes_[base | m];
  ConditionalQubitState out;
  out.branch_weight = std::norm(a0) + std::norm(a1);
  if (out.branch_weight > 0.0) {
    const double s = 1.0 / std::sqrt(out.branch_weight);
    out.c0 = a0 * s;
    out.c1 = a1 * s;
    out.empty = false;
  }
  return out;
}

std::size_t StateVector::map_conditional(std::span<const QubitIndex> targets,
                                         const LocalStateMap& fn, double threshold) {
  const std::size_t k = targets.size();
  if (k == 0 || k > num_qubits_) throw std::invalid_argument("map_conditional: bad target list");
  std::vector<std::uint64_t> masks(k);
  std::uint64_t all = 0;
  for (std::size_t j = 0; j < k; ++j) {
    check_qubit(targets[j]);
    masks[j] = std::uint64_t{1} << bit_of(targets[j]);
    if (all & masks[j]) throw std::invalid_argument("map_conditional: repeated qubit");
    all |= masks[j];
  }
  const std::uint64_t local_dim = std::uint64_t{1} << k;
  std::vector<std::uint64_t> offsets(local_dim, 0);
  for (std::uint64_t l = 0; l < local_dim; ++l) {
    for (std::size_t j = 0; j < k; ++j) {
      if ((l >> (k - 1 - j)) & 1) offsets[l] |= masks[j];
    }
  }
  const std::uint64_t rest_mask = (std::uint64_t{amplitudes_.size()} - 1) & ~all;
  const std::uint64_t branches = amplitudes_.size() >> k;

  std::size_t mapped = 0;
  Eigen::VectorXcd local(static_cast<Eigen::Index>(local_dim));
  for (std::uint64_t r = 0; r < branches; ++r) {
    const std::uint64_t base = deposit(r, rest_mask);
    double weight = 0.0;
    for (std::uint64_t l = 0; l < local_dim; ++l) {
      local[static_cast<Eigen::Index>(l)] = amplitudes_[base | offsets[l]];
      weight += std::norm(amplitudes_[base | offsets[l]]);
    }
    if (weight < threshold) continue;
    const double norm = std::sqrt(weight);
    const Eigen::VectorXcd image = fn(local / norm);
    if (image.size() != local.size()) {
      throw std::logic_error("map_conditional: local map changed the dimension");
    }
    for (std::uint64_t l = 0; l < local_dim; ++l) {
      amplitudes_[base | offsets[l]] = norm * image[static_cast<Eigen::Index>(l)];
    }
    ++mapped;
  }
  return mapped;
}

Mat2 StateVector::reduced_density_matrix(QubitIndex q) const {
  check_qubit(q);
  const std::uint64_t m = std::uint64_t{1} << bit_of(q);
  Mat2 rho = Mat2::Zero();
  for (std::uint64_t i = 0; i < amplitudes_.size(); ++i) {
    if (i & m) continue;
    const Amplitude a0 = amplitudes_[i];
    const Amplitude a1 = amplitudes_[i | m];
    rho(0, 0) += a0 * std::conj(a0);
    rho(0, 1) += a0 * std::conj(a1);
    rho(1, 0) += a1 * std::conj(a0);
    rho(1, 1) += a1 * std::conj(a1);
  }
  return rho;
}

Amplitude StateVector::inner_product(const StateVector& other) const {
  if (other.amplitudes_.size() != amplitudes_.size()) {
    throw std::invalid_argument("inner_product: dimension mismatch");
  }
  Amplitude s{};
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) s += std::conj(amplitudes_[i]) * other.amplitudes_[i];
  return s;
}

double StateVector::fidelity(const StateVector& other) const { return std::norm(inner_product(other)); }

Mat2 rotation(double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Mat2 r;
  r << c, s, -s, c;
  return r;
}

Mat2 ry(double angle) {
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}

Mat2 hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  Mat2 r;
  r << h, h, h, -h;
  return r;
}

Mat2 pauli_x() {
  Mat2 r;
  r << 0, 1, 1, 0;
  return r;
}

Mat2 pauli_z() {
  Mat2 r;
  r << 1, 0, 0, -1;
  return r;
}

Mat4 and_basis_change() {
  const double h = 1.0 / std::sqrt(2.0);
  Mat4 u;
  u << h, 0, 0, h,
       0, h, h, 0,
       0, h, -h, 0,
       h, 0, 0, -h;
  return u;
}

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

}  // namespace nlqc
