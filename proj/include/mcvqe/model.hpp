#pragma once

#include <array>
#include <optional>
#include <vector>

#include "mcvqe/pauli.hpp"

namespace mcvqe {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

/// Two-state monomer data, atomic units throughout.
struct MonomerData {
  int index = 0;
  double e_s0 = 0.0;  ///< ground-state energy (hartree)
  double e_s1 = 0.0;  ///< excited-state energy (hartree)
  Vec3 com{};         ///< center of mass (bohr)
  Vec3 mu_00{};       ///< ground-state dipole
  Vec3 mu_11{};       ///< excited-state dipole
  Vec3 mu_01{};       ///< transition dipole
  double x_intra = 0.0;

  friend bool operator==(const MonomerData&, const MonomerData&) = default;
};

enum class Topology { Linear, Cyclic, Pairs };

/// Unordered site pair stored with a > b.
struct SitePair {
  int a = 0;
  int b = 0;
  friend bool operator==(const SitePair&, const SitePair&) = default;
  friend auto operator<=>(const SitePair&, const SitePair&) = default;
};

struct Connectivity {
  int n_sites = 0;
  Topology topology = Topology::Linear;
  int neighbor_order = 1;
  std::vector<SitePair> pairs;        ///< explicit list (Topology::Pairs only)
  std::optional<double> cutoff;       ///< center-of-mass distance cutoff (bohr)

  static Connectivity linear(int n, int order = 1) { return {n, Topology::Linear, order, {}, {}}; }
  static Connectivity cyclic(int n, int order = 1) { return {n, Topology::Cyclic, order, {}, {}}; }
  static Connectivity explicit_pairs(int n, std::vector<SitePair> p) {
    return {n, Topology::Pairs, 1, std::move(p), {}};
  }

  /// Retained pairs (a > b), sorted, before any distance cutoff.
  std::vector<SitePair> topological_pairs() const;
};

/// Retained pairs after the optional distance cutoff; validates against the monomers.
std::vector<SitePair> retained_pairs(const Connectivity& conn, const std::vector<MonomerData>& monomers);

struct PairCoefficients {
  SitePair sites;
  double xx = 0.0;  ///< X_a X_b
  double xz = 0.0;  ///< X_a Z_b
  double zx = 0.0;  ///< Z_a X_b
  double zz = 0.0;  ///< Z_a Z_b
};

/// H = e_scalar + Σ_A z_A Z_A + x_A X_A + Σ_{A>B} (xx XX + xz XZ + zx ZX + zz ZZ)_AB
struct ExcitonHamiltonian {
  int n_sites = 0;
  double e_scalar = 0.0;
  std::vector<double> z;
  std::vector<double> x;
  std::vector<PairCoefficients> pairs;

  std::vector<PauliTerm> terms() const;
};

/// μ̂ = Σ_A mu_i·I + mu_z·(|1⟩⟨1| − |0⟩⟨0|) + mu_x·X, per Cartesian component.
/// With |0⟩ = ground and Z|0⟩ = +|0⟩, the mu_z part enters the Pauli form as −mu_z·Z.
struct DipoleOperator {
  std::vector<Vec3> mu_i;
  std::vector<Vec3> mu_z;
  std::vector<Vec3> mu_x;

  int n_sites() const { return static_cast<int>(mu_i.size()); }
  /// Pauli terms of the Cartesian component `axis` (0, 1, 2).
  std::vector<PauliTerm> component_terms(int axis) const;
};

/// (μ_a·μ_b − 3(μ_a·n)(μ_b·n)) / r³
double dipole_coupling(const Vec3& mu_a, const Vec3& mu_b, const Vec3& com_a, const Vec3& com_b);

/// Validates the monomer list (finite values, e_s1 >= e_s0, indices 0..N-1 in order).
void validate_monomers(const std::vector<MonomerData>& monomers);

ExcitonHamiltonian build_hamiltonian(const std::vector<MonomerData>& monomers,
                                     const Connectivity& conn);

DipoleOperator build_dipole_operator(const std::vector<MonomerData>& monomers);

}  // namespace mcvqe
