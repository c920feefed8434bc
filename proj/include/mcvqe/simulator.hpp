#pragma once

#include <span>
#include <string>
#include <vector>

#include "mcvqe/matrix.hpp"
#include "mcvqe/pauli.hpp"

namespace mcvqe {

enum class GateKind { Ry, H, X, Z, CNOT, CZ, CFy, SO4 };

std::string to_string(GateKind kind);

/// A real gate on one or two qubits. For two-qubit gates `q0` is the more
/// significant index of the local 4x4 block (control for CNOT/CZ/CFy).
struct Gate {
  GateKind kind = GateKind::H;
  int q0 = 0;
  int q1 = -1;
  double angle = 0.0;
  Mat4 block{};  ///< SO4 only

  /// Ry(θ) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]
  static Gate ry(int q, double theta) { return {GateKind::Ry, q, -1, theta, {}}; }
  static Gate h(int q) { return {GateKind::H, q, -1, 0.0, {}}; }
  static Gate x(int q) { return {GateKind::X, q, -1, 0.0, {}}; }
  static Gate z(int q) { return {GateKind::Z, q, -1, 0.0, {}}; }
  static Gate cnot(int control, int target) { return {GateKind::CNOT, control, target, 0.0, {}}; }
  static Gate cz(int control, int target) { return {GateKind::CZ, control, target, 0.0, {}}; }
  /// Controlled F_y: I ⊕ [[cos θ, sin θ], [sin θ, −cos θ]] on (control ⊗ target).
  static Gate cfy(int control, int target, double theta) {
    return {GateKind::CFy, control, target, theta, {}};
  }
  /// Throws unless `m` is orthogonal with det +1 (to 1e-12).
  static Gate so4(int first, int second, const Mat4& m);

  bool two_qubit() const { return q1 >= 0; }
  Mat2 matrix2() const;  ///< single-qubit gates
  Mat4 matrix4() const;  ///< two-qubit gates
};

class Circuit {
 public:
  explicit Circuit(int n_qubits);

  int n_qubits() const noexcept { return n_qubits_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  std::size_t size() const noexcept { return gates_.size(); }

  Circuit& add(const Gate& g);
  Circuit& append(const Circuit& other);

 private:
  int n_qubits_;
  std::vector<Gate> gates_;
};

/// 2^N real amplitudes; site/qubit 0 is the most significant bit.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(int n_qubits);  ///< |0…0⟩
  StateVector(int n_qubits, std::vector<double> amplitudes);

  static StateVector basis(int n_qubits, Config index);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<double> amplitudes() noexcept { return amps_; }
  std::span<const double> amplitudes() const noexcept { return amps_; }
  double operator[](std::size_t i) const { return amps_[i]; }
  double norm() const;

 private:
  int n_qubits_ = 0;
  std::vector<double> amps_;
};

void apply_gate(StateVector& state, const Gate& gate);
void apply_circuit_inplace(StateVector& state, const Circuit& circuit);
StateVector apply_circuit(StateVector state, const Circuit& circuit);

double expectation(const StateVector& state, std::span<const PauliTerm> terms);
double expectation(const StateVector& state, const CompiledOperator& op);
double inner_product(const StateVector& a, const StateVector& b);

}  // namespace mcvqe
