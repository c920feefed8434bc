#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mcvqe/matrix.hpp"
#include "mcvqe/model.hpp"
#include "mcvqe/simulator.hpp"

namespace mcvqe {

using SixAngles = std::array<double, 6>;

enum class Parametrization {
  Antisym,     ///< (A, B, C, D, E, F) generator entries
  Pauli,       ///< (θ_IY, θ_YI, θ_XY, θ_YX, θ_ZY, θ_YZ)
  GateNative,  ///< (θ_1 … θ_6) of the Ry/CNOT/Ry/CNOT/Ry circuit
};

std::string to_string(Parametrization p);
Parametrization parametrization_from_string(const std::string& s);

/// Ordered qubit pairs for one entangler layer, split into sublayers of
/// non-overlapping pairs. The first qubit of a pair is the more significant
/// index of its 4x4 block.
struct EntanglerLayout {
  int n_qubits = 0;
  std::vector<std::vector<std::pair<int, int>>> sublayers;

  std::vector<std::pair<int, int>> pairs() const;
  std::size_t n_pairs() const;
  void validate() const;

  /// Brick pattern (0,1),(2,3),… then (1,2),(3,4),…; cyclic appends (N-1,0).
  static EntanglerLayout brick(int n_qubits, bool cyclic);
  /// One block per Hamiltonian pair: nearest neighbours in brick order, then
  /// longer-range pairs greedily packed into further sublayers.
  static EntanglerLayout from_connectivity(const Connectivity& conn,
                                           const std::vector<SitePair>& pairs);
};

struct EntanglerParams {
  EntanglerLayout layout;
  int n_layers = 1;
  Parametrization parametrization = Parametrization::Pauli;
  std::vector<double> values;  ///< 6 per pair, pairs in layout order, layer-major

  static EntanglerParams zeros(EntanglerLayout layout, int n_layers, Parametrization p);
  std::size_t n_params() const { return values.size(); }
  SixAngles block(std::size_t layer, std::size_t pair_index) const;
};

/// exp of the antisymmetric matrix with +A (0,1), +B (0,2), +C (0,3), +D (1,2),
/// +E (1,3), +F (2,3).
Mat4 so4_from_antisym(const SixAngles& abcdef);
/// exp(Σ θ_P (−i P)) over the six real two-qubit generators.
Mat4 so4_from_pauli_angles(const SixAngles& theta);
SixAngles map_pauli_to_antisym(const SixAngles& theta);
SixAngles map_antisym_to_pauli(const SixAngles& abcdef);

/// The six generator matrices −iY⊗I, −iY⊗X, −iY⊗Z, −iI⊗Y, −iX⊗Y, −iZ⊗Y.
std::array<Mat4, 6> pauli_generators();

/// Ry(θ1)⊗Ry(θ2), CNOT, Ry(θ3)⊗Ry(θ4), CNOT, Ry(θ5)⊗Ry(θ6) on `pair`.
Circuit gate_native_circuit(const SixAngles& theta, std::pair<int, int> pair, int n_qubits);
/// Dense 4x4 of gate_native_circuit in the pair's local ordering.
Mat4 gate_native_matrix(const SixAngles& theta);

Mat4 so4_block(Parametrization p, const SixAngles& values);

/// One SO4 block per pair per layer.
Circuit build_entangler_circuit(const EntanglerParams& params);

}  // namespace mcvqe
