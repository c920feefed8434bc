#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcvqe/model.hpp"

namespace mcvqe {

enum class SynthKind { Ring, Stack };

std::string to_string(SynthKind k);
SynthKind synth_kind_from_string(const std::string& s);

/// Synthetic aggregate of two-level monomers, atomic units.
///
/// Ring: sites on a circle in the xy plane, `distance` is the nearest-neighbour
/// chord, transition dipoles tangential (head-to-tail, J-type), cyclic
/// connectivity. Stack: sites along z spaced by `distance`, transition dipoles
/// parallel along x (side-by-side, H-type), linear connectivity.
struct SynthSpec {
  SynthKind kind = SynthKind::Ring;
  int n_sites = 6;
  std::uint64_t seed = 1;
  double gap = 0.06;                ///< mean e_s1 − e_s0
  double gap_sigma = 0.0;           ///< Gaussian disorder on the gap
  double distance = 0.0;            ///< 0 picks the kind default
  double transition_dipole = 0.0;   ///< |mu_01|; 0 picks the kind default
  double difference_dipole = 0.0;   ///< |mu_11 − mu_00|; along the transition dipole
  double ground_dipole = 0.0;       ///< |mu_00|; ring: along z, stack: along y

  /// Defaults per kind: ring targets |V_nn|/gap ≈ 0.02, stack a strongly coupled regime.
  static SynthSpec defaults(SynthKind kind, int n_sites);
  void validate() const;
};

struct SynthSystem {
  std::vector<MonomerData> monomers;
  Connectivity connectivity;
};

SynthSystem generate(const SynthSpec& spec);

}  // namespace mcvqe
