#include "mcvqe/reference_states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mcvqe/error.hpp"
#include "mcvqe/numerics.hpp"

namespace mcvqe {

namespace {

constexpr double kDegenerateSine = 1e-14;

}  // namespace

Config cis_configuration(int n_sites, int k) {
  require(k >= 0 && k <= n_sites, ErrorKind::InvalidArgument, "cis: configuration index out of range");
  return k == 0 ? Config{0} : site_mask(n_sites, k - 1);
}

Matrix cis_matrix(const ExcitonHamiltonian& h) {
  const int n = h.n_sites;
  const auto terms = h.terms();
  Matrix m(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      m(i, j) = pauli_matrix_element(n, cis_configuration(n, i), cis_configuration(n, j), terms);
  return m;
}

void canonicalize_columns(Matrix& vectors) {
  for (std::size_t c = 0; c < vectors.cols(); ++c) {
    for (std::size_t r = 0; r < vectors.rows(); ++r) {
      const double v = vectors(r, c);
      if (std::abs(v) > 1e-10) {
        if (v < 0.0)
          for (std::size_t k = 0; k < vectors.rows(); ++k) vectors(k, c) = -vectors(k, c);
        break;
      }
    }
  }
}

CisSolution solve_cis(const ExcitonHamiltonian& h) {
  auto eig = numerics::eigh(cis_matrix(h));
  canonicalize_columns(eig.vectors);
  return {h.n_sites, std::move(eig.values), std::move(eig.vectors)};
}

CisAngles cis_angles(std::span<const double> coeffs) {
  require(coeffs.size() >= 2, ErrorKind::InvalidArgument, "cis_angles: need at least 2 coefficients");
  require(std::abs(norm2(coeffs) - 1.0) < 1e-8, ErrorKind::InvalidArgument,
          "cis_angles: coefficient vector is not normalized");
  const std::size_t n_sites = coeffs.size() - 1;

  // tail[k] = ‖(c_k, …, c_N)‖ equals the running sine product in front of c_k,
  // so θ = arccos(c_k / tail[k]) = atan2(tail[k+1], c_k); the atan2 form keeps
  // full precision near θ = 0 and π.
  std::vector<double> tail(coeffs.size() + 1, 0.0);
  for (std::size_t k = coeffs.size(); k-- > 0;) tail[k] = std::hypot(tail[k + 1], coeffs[k]);

  CisAngles out;
  out.chain.assign(n_sites - 1, 0.0);
  auto angle = [&](std::size_t k) -> double& { return k == 0 ? out.pump : out.chain[k - 1]; };
  for (std::size_t k = 0; k < n_sites; ++k) {
    if (tail[k] < kDegenerateSine) break;  // remaining coefficients vanish; angles stay 0
    if (k + 1 == n_sites) {
      // Last angle: only its cosine is fixed by the recursion; the sign is
      // chosen so the forward formula reproduces the final coefficient.
      angle(k) = std::atan2(coeffs[k + 1], coeffs[k]);
    } else {
      angle(k) = std::atan2(tail[k + 1], coeffs[k]);
    }
  }
  return out;
}

std::vector<double> cis_coefficients(const CisAngles& angles) {
  const int n = angles.n_sites();
  std::vector<double> c(n + 1);
  c[0] = std::cos(angles.pump);
  double sine_product = std::sin(angles.pump);
  for (int k = 0; k < n - 1; ++k) {
    c[k + 1] = sine_product * std::cos(angles.chain[k]);
    sine_product *= std::sin(angles.chain[k]);
  }
  c[n] = sine_product;
  return c;
}

Circuit cis_prep_circuit(const CisAngles& angles) {
  const int n = angles.n_sites();
  Circuit circ(n);
  // Ry uses the half-angle convention, so a pump of 2θ₀ gives μ = cos θ₀.
  circ.add(Gate::ry(0, 2.0 * angles.pump));
  for (int k = 0; k + 1 < n; ++k) circ.add(Gate::cfy(k, k + 1, angles.chain[k]));
  for (int target = n - 2; target >= 0; --target)
    for (int control = n - 1; control > target; --control) circ.add(Gate::cnot(control, target));
  return circ;
}

std::vector<double> interference_coeffs(std::span<const double> v_a, std::span<const double> v_b,
                                        int sign) {
  require(v_a.size() == v_b.size(), ErrorKind::DimensionMismatch,
          "interference_coeffs: vector lengths differ");
  require(sign == 1 || sign == -1, ErrorKind::InvalidArgument, "interference_coeffs: sign must be ±1");
  require(std::abs(dot(v_a, v_a) - 1.0) <= 1e-8 && std::abs(dot(v_b, v_b) - 1.0) <= 1e-8 &&
              std::abs(dot(v_a, v_b)) <= 1e-8,
          ErrorKind::InvalidArgument, "interference_coeffs: inputs are not orthonormal");
  std::vector<double> out(v_a.size());
  const double r = 1.0 / std::numbers::sqrt2;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (v_a[i] + sign * v_b[i]) * r;
  return out;
}

StateVector prepare_cis_state(std::span<const double> coeffs) {
  const auto angles = cis_angles(coeffs);
  return apply_circuit(StateVector(angles.n_sites()), cis_prep_circuit(angles));
}

}  // namespace mcvqe
