#pragma once

#include <span>
#include <vector>

#include "mcvqe/matrix.hpp"
#include "mcvqe/model.hpp"
#include "mcvqe/simulator.hpp"

namespace mcvqe {

/// CIS basis ordering: {|0…0⟩, |e_0⟩, …, |e_{N-1}⟩}, |e_A⟩ flipping site A.
Config cis_configuration(int n_sites, int k);

struct CisSolution {
  int n_sites = 0;
  std::vector<double> energies;  ///< N+1 ascending, hartree
  Matrix vectors;                ///< column Θ = (μ, α, β, …); first nonzero entry positive

  std::vector<double> vector(int theta) const { return vectors.column(theta); }
};

/// Pump angle plus the N-1 chain angles of the controlled-F_y cascade, with
/// μ = cos θ₀, c_0 = sin θ₀ cos θ₀₁, …, c_{N-1} = sin θ₀ ⋯ sin θ_{N-2,N-1}.
struct CisAngles {
  double pump = 0.0;
  std::vector<double> chain;

  int n_sites() const { return static_cast<int>(chain.size()) + 1; }
};

Matrix cis_matrix(const ExcitonHamiltonian& h);
CisSolution solve_cis(const ExcitonHamiltonian& h);

/// Flips column signs so the first entry with |v| > 1e-10 is positive.
void canonicalize_columns(Matrix& vectors);

CisAngles cis_angles(std::span<const double> coeffs);
/// Forward map from angles back to the N+1 coefficients.
std::vector<double> cis_coefficients(const CisAngles& angles);

/// Ry pump on qubit 0, CF_y chain (k → k+1), then the CNOT fan mapping the
/// prefix ("thermometer") configurations onto single flips.
Circuit cis_prep_circuit(const CisAngles& angles);

/// (v_a + sign v_b) / √2; inputs must be orthonormal within 1e-8.
std::vector<double> interference_coeffs(std::span<const double> v_a, std::span<const double> v_b,
                                        int sign);

/// |Φ⟩ prepared by simulating cis_prep_circuit(cis_angles(coeffs)) on |0…0⟩.
StateVector prepare_cis_state(std::span<const double> coeffs);

}  // namespace mcvqe
