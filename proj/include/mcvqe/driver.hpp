#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "mcvqe/entangler.hpp"
#include "mcvqe/matrix.hpp"
#include "mcvqe/model.hpp"
#include "mcvqe/numerics.hpp"
#include "mcvqe/reference_states.hpp"
#include "mcvqe/simulator.hpp"

namespace mcvqe {

enum class OptimizerKind { Lbfgs, Powell };

std::string to_string(OptimizerKind k);
OptimizerKind optimizer_from_string(const std::string& s);

struct McVqeConfig {
  int n_states = 0;  ///< 0 means N+1
  double fd_step = 0.01;
  double gtol = 1e-7;
  int max_iter = 200;
  OptimizerKind optimizer = OptimizerKind::Lbfgs;
  int n_layers = 1;
  Parametrization parametrization = Parametrization::Pauli;
  int threads = 1;  ///< workers over reference states; results do not depend on it
  std::function<void(const numerics::TraceEntry&)> on_iterate;

  void validate(int n_sites) const;
  int resolved_states(int n_sites) const { return n_states > 0 ? n_states : n_sites + 1; }
};

/// Everything the objective needs, with the CIS reference states prepared once.
class McVqeProblem {
 public:
  McVqeProblem(const ExcitonHamiltonian& h, const Connectivity& conn,
               const std::vector<SitePair>& pairs, const McVqeConfig& config);
  McVqeProblem(const ExcitonHamiltonian& h, CisSolution cis, EntanglerLayout layout,
               const McVqeConfig& config);

  int n_sites() const { return h_.n_sites; }
  int n_states() const { return n_states_; }
  std::size_t n_params() const { return zero_params().n_params(); }
  const ExcitonHamiltonian& hamiltonian() const { return h_; }
  const CisSolution& cis() const { return cis_; }
  const CompiledOperator& compiled_hamiltonian() const { return op_; }
  const McVqeConfig& config() const { return config_; }
  const EntanglerLayout& layout() const { return layout_; }

  EntanglerParams zero_params() const;
  EntanglerParams params(std::span<const double> values) const;

  /// ⟨Φ_Θ|Ûᵀ H Û|Φ_Θ⟩
  double diagonal_element(int theta, std::span<const double> values) const;
  /// Ē = (1/N_Θ) Σ_Θ diagonal_element(Θ)
  double state_averaged_energy(std::span<const double> values) const;
  /// Central differences of Ē with step Δ. Reuses the state in front of each
  /// block, so only the suffix of the circuit is re-simulated per component.
  std::vector<double> fd_gradient(std::span<const double> values, double step) const;

  /// Ûᵀ-rotated reference-basis matrices of each operator: diagonal from |Φ_Θ⟩,
  /// off-diagonal from [E(+) − E(−)]/2 on the interference states.
  std::vector<Matrix> reference_matrices(std::span<const double> values,
                                         std::span<const CompiledOperator> ops) const;

  /// Û|c⟩ for CIS-basis coefficients c.
  StateVector entangled_state(std::span<const double> coeffs, std::span<const double> values) const;

 private:
  void prepare_references();
  std::vector<Mat4> block_matrices(std::span<const double> values) const;
  void apply_blocks(StateVector& s, const std::vector<Mat4>& blocks, std::size_t first) const;
  template <class F>
  void for_each_state(F&& body) const;

  ExcitonHamiltonian h_;
  CisSolution cis_;
  EntanglerLayout layout_;
  std::vector<std::pair<int, int>> pairs_;
  McVqeConfig config_;
  int n_states_ = 0;
  CompiledOperator op_;
  std::vector<StateVector> references_;
};

struct SubspaceResult {
  Matrix h_sub;                  ///< reference basis, hartree
  std::vector<double> energies;  ///< ascending
  Matrix v;                      ///< column Θ pairs with energies[Θ]
};

SubspaceResult diagonalize_subspace(Matrix h_sub);
SubspaceResult assemble_subspace(const McVqeProblem& problem, std::span<const double> values);

/// Vᵀ M V with M the reference-basis matrix of `terms`.
Matrix contracted_operator(const McVqeProblem& problem, std::span<const double> values,
                           std::span<const PauliTerm> terms, const Matrix& v);

numerics::OptimizeResult optimize_entangler(const McVqeProblem& problem);

/// Γ_Θ = (CIS vectors) V[:, Θ], prepared and entangled.
StateVector prepare_eigenstate(const McVqeProblem& problem, int theta,
                               std::span<const double> values, const Matrix& v);

/// P_A = (1 − ⟨Z_A⟩)/2
std::vector<double> populations(const StateVector& state);
double fidelity(const StateVector& a, const StateVector& b);

/// O = (2/3) ΔE ‖d‖²; zero for ΔE <= 0.
double oscillator_strength(double delta_e, const Vec3& transition_dipole);

struct TransitionSet {
  std::vector<double> energies;                   ///< hartree, ascending
  std::vector<double> excitation_ev;              ///< E_Θ − E_0
  std::vector<Vec3> transition_dipoles;           ///< ⟨Ψ_0|μ̂|Ψ_Θ⟩
  std::vector<double> oscillator_strengths;       ///< entry 0 is 0
  std::vector<std::vector<double>> populations;   ///< [Θ][A]
  std::vector<bool> degenerate;                   ///< |E_Θ − E_Θ'| < 1e-8 for some Θ' ≠ Θ
};

/// dipoles[c] holds ⟨Ψ_Θ|μ̂_c|Ψ_Θ'⟩ in the eigenbasis.
TransitionSet make_transitions(const std::vector<double>& energies,
                               const std::array<Matrix, 3>& dipoles,
                               std::vector<std::vector<double>> pops);
/// From explicit eigenstates (CIS, FCI).
TransitionSet transitions_from_states(const std::vector<double>& energies,
                                      const std::vector<StateVector>& states,
                                      const DipoleOperator& dipole);

std::array<CompiledOperator, 3> compile_dipole(const DipoleOperator& dipole);

struct McVqeRun {
  numerics::OptimizeResult optimization;
  EntanglerParams params;
  SubspaceResult subspace;
  TransitionSet transitions;
  std::vector<StateVector> eigenstates;
};

/// Optimize, assemble, diagonalize, and extract transition properties.
McVqeRun run_mcvqe(const McVqeProblem& problem, const DipoleOperator& dipole);
/// As run_mcvqe, but at fixed entangler parameters.
McVqeRun evaluate_mcvqe(const McVqeProblem& problem, const DipoleOperator& dipole,
                        std::vector<double> values);

/// CIS states prepared by circuit, with transitions.
struct CisRun {
  CisSolution solution;
  std::vector<StateVector> states;
  TransitionSet transitions;
};
CisRun run_cis(const ExcitonHamiltonian& h, const DipoleOperator& dipole, int n_states);

}  // namespace mcvqe
