#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mcvqe/matrix.hpp"

namespace mcvqe::numerics {

struct EighResult {
  std::vector<double> values;  ///< ascending
  Matrix vectors;              ///< column j pairs with values[j]
};

/// Symmetric eigendecomposition (Householder tridiagonalization + implicit QL).
/// Throws ErrorKind::InvalidArgument if |M - Mᵀ| exceeds 1e-10 (relative to
/// max(1, max|M|)). Equal eigenvalues keep their original QL output order.
EighResult eigh(const Matrix& m);

/// exp(A) for a 4x4 antisymmetric A, by scaling and squaring a Taylor series.
Mat4 expm_antisym4(const Mat4& a);

using Objective = std::function<double(std::span<const double>)>;
using Gradient = std::function<std::vector<double>(std::span<const double>)>;

/// Central finite-difference gradient, component i = (f(x+Δe_i) - f(x-Δe_i)) / 2Δ.
std::vector<double> fd_gradient(const Objective& f, std::span<const double> x, double step);

struct TraceEntry {
  int iteration = 0;
  double value = 0.0;
  double gradient_max = 0.0;  ///< 0 for gradient-free methods
};

struct OptimizerOptions {
  int max_iter = 200;
  double gtol = 1e-7;          ///< on max |g|
  double ftol = 1e-12;         ///< relative decrease tolerance (Powell)
  int memory = 10;             ///< L-BFGS correction pairs
  double c1 = 1e-4;            ///< Armijo constant
  double c2 = 0.9;             ///< curvature constant (strong Wolfe)
  int max_linesearch = 30;
  double initial_step = 1.0;   ///< max-norm of the first trial step
  double fd_step = 0.01;
  std::function<void(const TraceEntry&)> on_iterate;  ///< called per accepted iterate
};

struct OptimizeResult {
  std::vector<double> x;  ///< best point seen
  double value = 0.0;
  double gradient_max = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string status;
  std::vector<TraceEntry> trace;  ///< accepted iterates, starting with x0
};

OptimizeResult lbfgs(const Objective& f, const Gradient& grad, std::vector<double> x0,
                     const OptimizerOptions& opts = {});

/// Powell's conjugate-direction method with Brent line searches. Terminates when
/// the decrease over one sweep satisfies 2|Δf| <= ftol (|f| + |f_prev|) + 1e-300.
OptimizeResult powell(const Objective& f, std::vector<double> x0,
                      const OptimizerOptions& opts = {});

}  // namespace mcvqe::numerics
