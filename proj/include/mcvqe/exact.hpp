#pragma once

#include <cstdint>
#include <vector>

#include "mcvqe/model.hpp"
#include "mcvqe/simulator.hpp"

namespace mcvqe {

struct FciOptions {
  int dense_threshold = 10;  ///< dense eigh up to this many sites
  int dense_cap = kDefaultDenseCap;
  int max_sites = 20;        ///< iterative path limit
  int krylov_dim = 0;        ///< 0 picks max(2k + 20, 40)
  int max_restarts = 300;
  double tol = 1e-10;        ///< residual norm ‖Hv − λv‖
  std::uint64_t seed = 20190213;
  bool force_iterative = false;
};

struct FciResult {
  std::vector<double> energies;       ///< ascending, hartree
  std::vector<StateVector> vectors;   ///< first |amp| > 1e-10 positive
  std::vector<double> residuals;
  bool dense = false;
  int restarts = 0;
  int matvecs = 0;
};

/// Lowest k eigenpairs of the full 2^N Hamiltonian.
FciResult fci_solve(const ExcitonHamiltonian& h, int k, const FciOptions& opts = {});

}  // namespace mcvqe
