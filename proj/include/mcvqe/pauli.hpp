#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mcvqe/matrix.hpp"

namespace mcvqe {

/// Computational-basis configuration: bit for site A sits at position
/// (n_sites - 1 - A), i.e. site 0 is the most significant bit.
using Config = std::uint64_t;

inline constexpr int kMaxQubits = 24;
inline constexpr int kDefaultDenseCap = 12;

inline Config site_mask(int n_sites, int site) {
  return Config{1} << (n_sites - 1 - site);
}

inline int site_bit(Config c, int n_sites, int site) {
  return static_cast<int>((c >> (n_sites - 1 - site)) & 1u);
}

enum class Axis : std::uint8_t { X, Y, Z };

struct PauliFactor {
  int site = 0;
  Axis axis = Axis::Z;
  friend bool operator==(const PauliFactor&, const PauliFactor&) = default;
};

/// coefficient × ⊗ factors (identity on unlisted sites).
struct PauliTerm {
  double coefficient = 0.0;
  std::vector<PauliFactor> factors;  ///< strictly increasing sites

  static PauliTerm identity(double c) { return {c, {}}; }
  static PauliTerm single(double c, int site, Axis a) { return {c, {{site, a}}}; }
  /// Two-site term; sites may be given in any order.
  static PauliTerm pair(double c, int site_a, Axis a, int site_b, Axis b);
};

/// Throws unless every factor lies within n_sites, sites strictly increase, and
/// the number of Y factors is even (the operator is then real).
void validate_terms(std::span<const PauliTerm> terms, int n_sites);

/// ⟨bra| Σ terms |ket⟩. Z contributes +1 (bit 0) / −1 (bit 1) and needs equal
/// bits; X and Y need flipped bits; a term contributes iff its X/Y support
/// equals bra XOR ket.
double pauli_matrix_element(int n_sites, Config bra, Config ket, std::span<const PauliTerm> terms);

/// Dense 2^N x 2^N matrix of Σ terms. Exactly symmetric.
Matrix to_dense(std::span<const PauliTerm> terms, int n_sites, int dense_cap = kDefaultDenseCap);

/// Terms regrouped by flip mask with tabulated sign patterns, for fast
/// statevector application. Results are a deterministic function of the input
/// term order.
class CompiledOperator {
 public:
  CompiledOperator() = default;
  CompiledOperator(std::span<const PauliTerm> terms, int n_sites);

  int n_sites() const noexcept { return n_sites_; }

  /// ⟨ψ|O|ψ⟩
  double expectation(std::span<const double> psi) const;
  /// ⟨φ|O|ψ⟩
  double matrix_element(std::span<const double> phi, std::span<const double> psi) const;
  /// out = O ψ
  void apply(std::span<const double> psi, std::span<double> out) const;

 private:
  // Kets split as (hi, lo) with lo the low `lo_bits_` bits. The coefficient of
  // a group at ket is table[hi_index[hi] | lo_index[lo]].
  struct Group {
    Config flip = 0;
    std::vector<double> table;
    std::vector<std::uint32_t> hi_index;
    std::vector<std::uint32_t> lo_index;
  };

  template <class Pair, class Diag>
  void visit(const Group& g, Pair&& pair, Diag&& diag) const;

  int n_sites_ = 0;
  int lo_bits_ = 0;
  std::vector<Group> groups_;
};

}  // namespace mcvqe
