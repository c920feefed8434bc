#pragma once

// Dense reference constructions shared by the unit and acceptance tests. They
// build everything from explicit 2x2 matrices and Kronecker products, never
// from the library's own bit tricks.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "mcvqe/matrix.hpp"
#include "mcvqe/entangler.hpp"
#include "mcvqe/model.hpp"
#include "mcvqe/numerics.hpp"
#include "mcvqe/pauli.hpp"
#include "mcvqe/simulator.hpp"

namespace oracle {

using mcvqe::Matrix;
using mcvqe::operator+;
using mcvqe::operator-;

inline Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

inline Matrix eye(std::size_t n) { return Matrix::identity(n); }
inline Matrix pauli_x() { return mat2(0, 1, 1, 0); }
inline Matrix pauli_z() { return mat2(1, 0, 0, -1); }
/// −iY, real.
inline Matrix pauli_w() { return mat2(0, -1, 1, 0); }

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          m(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return m;
}

/// I ⊗ … ⊗ m (at `site`) ⊗ … ⊗ I, site 0 leftmost.
inline Matrix lift(const Matrix& m, int site, int n) {
  Matrix out = site == 0 ? m : eye(2);
  for (int s = 1; s < n; ++s) out = kron(out, s == site ? m : eye(2));
  return out;
}

/// Adjacent-ordered two-qubit matrix on (q0, q1) with q0 the more significant
/// local index, via a permutation of the Kronecker embedding on (0, 1).
inline Matrix lift2(const Matrix& m4, int q0, int q1, int n) {
  Matrix base = m4;
  for (int s = 2; s < n; ++s) base = kron(base, eye(2));
  // Permutation sending qubit order (q0, q1, rest...) to (0, 1, ..., n-1).
  std::vector<int> order{q0, q1};
  for (int s = 0; s < n; ++s)
    if (s != q0 && s != q1) order.push_back(s);
  const std::size_t dim = std::size_t{1} << n;
  auto to_natural = [&](std::size_t idx) {
    std::size_t out = 0;
    for (int pos = 0; pos < n; ++pos) {
      const std::size_t bit = (idx >> (n - 1 - pos)) & 1u;
      out |= bit << (n - 1 - order[pos]);
    }
    return out;
  };
  Matrix r(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) r(to_natural(i), to_natural(j)) = base(i, j);
  return r;
}

inline Matrix add(const Matrix& a, const Matrix& b, double scale = 1.0) {
  Matrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < cd.size(); ++i) cd[i] += scale * bd[i];
  return c;
}

inline Matrix scaled(const Matrix& a, double s) {
  Matrix c = a;
  for (double& x : c.data()) x *= s;
  return c;
}

inline Matrix from_mat4(const mcvqe::Mat4& m) {
  Matrix r(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r(i, j) = m[i][j];
  return r;
}

/// Dense operator of Pauli terms, using Y = i W so an even number of Y factors
/// gives (−1)^{n_Y/2} ⊗ W.
inline Matrix pauli_terms_dense(const std::vector<mcvqe::PauliTerm>& terms, int n) {
  const std::size_t dim = std::size_t{1} << n;
  Matrix total(dim, dim);
  for (const auto& t : terms) {
    std::vector<Matrix> f(n, eye(2));
    int n_y = 0;
    for (const auto& pf : t.factors) {
      switch (pf.axis) {
        case mcvqe::Axis::X: f[pf.site] = pauli_x(); break;
        case mcvqe::Axis::Z: f[pf.site] = pauli_z(); break;
        case mcvqe::Axis::Y: f[pf.site] = pauli_w(); ++n_y; break;
      }
    }
    Matrix op = f[0];
    for (int s = 1; s < n; ++s) op = kron(op, f[s]);
    const double phase = (n_y / 2) % 2 == 0 ? 1.0 : -1.0;
    total = add(total, op, phase * t.coefficient);
  }
  return total;
}

inline double dipole_tensor(int i, int j, const mcvqe::Vec3& ca, const mcvqe::Vec3& cb) {
  const mcvqe::Vec3 d = ca - cb;
  const double r = std::sqrt(mcvqe::dot(d, d));
  return ((i == j ? 1.0 : 0.0) - 3.0 * d[i] * d[j] / (r * r)) / (r * r * r);
}

/// Monomer-basis Hamiltonian: Σ_A diag(e0, e1) + x_intra X, plus the full
/// point-dipole interaction Σ_ij T_ij M_A^i ⊗ M_B^j on each retained pair,
/// with M^i = [[μ00_i, μ01_i], [μ01_i, μ11_i]].
inline Matrix exciton_dense(const std::vector<mcvqe::MonomerData>& m,
                            const std::vector<mcvqe::SitePair>& pairs) {
  const int n = static_cast<int>(m.size());
  const std::size_t dim = std::size_t{1} << n;
  Matrix h(dim, dim);
  auto mu = [&](int site, int i) {
    return mat2(m[site].mu_00[i], m[site].mu_01[i], m[site].mu_01[i], m[site].mu_11[i]);
  };
  for (int a = 0; a < n; ++a)
    h = add(h, lift(mat2(m[a].e_s0, m[a].x_intra, m[a].x_intra, m[a].e_s1), a, n));
  for (const auto& p : pairs)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double t = dipole_tensor(i, j, m[p.a].com, m[p.b].com);
        h = add(h, lift(mu(p.a, i), p.a, n) * lift(mu(p.b, j), p.b, n), t);
      }
  return h;
}

/// Σ_A M_A^axis lifted, i.e. the total dipole in the monomer basis.
inline Matrix dipole_dense(const std::vector<mcvqe::MonomerData>& m, int axis) {
  const int n = static_cast<int>(m.size());
  const std::size_t dim = std::size_t{1} << n;
  Matrix d(dim, dim);
  for (int a = 0; a < n; ++a)
    d = add(d, lift(mat2(m[a].mu_00[axis], m[a].mu_01[axis], m[a].mu_01[axis], m[a].mu_11[axis]),
                    a, n));
  return d;
}

inline mcvqe::Vec3 random_vec(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

/// Random monomers on a jittered line, spacing ~`spacing` bohr.
inline std::vector<mcvqe::MonomerData> random_monomers(int n, std::mt19937_64& rng,
                                                       double spacing = 8.0,
                                                       double dipole = 1.5,
                                                       double x_intra = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<mcvqe::MonomerData> out(n);
  for (int a = 0; a < n; ++a) {
    auto& mm = out[a];
    mm.index = a;
    mm.e_s0 = -0.1 * u(rng);
    mm.e_s1 = mm.e_s0 + 0.05 + 0.05 * u(rng);
    mm.com = mcvqe::Vec3{spacing * a, 0.0, 0.0} + random_vec(rng, 1.0);
    mm.mu_00 = random_vec(rng, 0.5);
    mm.mu_11 = random_vec(rng, 0.5);
    mm.mu_01 = random_vec(rng, dipole);
    mm.x_intra = x_intra * (2 * u(rng) - 1);
  }
  return out;
}

inline std::vector<mcvqe::SitePair> all_pairs(int n) {
  std::vector<mcvqe::SitePair> p;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < a; ++b) p.push_back({a, b});
  return p;
}

inline std::vector<double> matvec(const Matrix& m, std::span<const double> v) { return m * v; }

inline double quad(const Matrix& m, std::span<const double> v) {
  const auto mv = m * v;
  return mcvqe::dot(v, mv);
}

inline double bilinear(std::span<const double> a, const Matrix& m, std::span<const double> b) {
  const auto mb = m * b;
  return mcvqe::dot(a, mb);
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Dense unitary of a gate, from explicit textbook matrices.
inline Matrix gate_dense(const mcvqe::Gate& g, int n) {
  using mcvqe::GateKind;
  switch (g.kind) {
    case GateKind::Ry: {
      const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
      return lift(mat2(c, -s, s, c), g.q0, n);
    }
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      return lift(mat2(r, r, r, -r), g.q0, n);
    }
    case GateKind::X: return lift(pauli_x(), g.q0, n);
    case GateKind::Z: return lift(pauli_z(), g.q0, n);
    case GateKind::CNOT: {
      const Matrix p0 = mat2(1, 0, 0, 0), p1 = mat2(0, 0, 0, 1);
      return add(lift(p0, g.q0, n), lift(p1, g.q0, n) * lift(pauli_x(), g.q1, n));
    }
    case GateKind::CZ: {
      const Matrix p0 = mat2(1, 0, 0, 0), p1 = mat2(0, 0, 0, 1);
      return add(lift(p0, g.q0, n), lift(p1, g.q0, n) * lift(pauli_z(), g.q1, n));
    }
    case GateKind::CFy: {
      const Matrix p0 = mat2(1, 0, 0, 0), p1 = mat2(0, 0, 0, 1);
      const double c = std::cos(g.angle), s = std::sin(g.angle);
      return add(lift(p0, g.q0, n), lift(p1, g.q0, n) * lift(mat2(c, s, s, -c), g.q1, n));
    }
    case GateKind::SO4: return lift2(from_mat4(g.block), g.q0, g.q1, n);
  }
  return eye(std::size_t{1} << n);
}

inline std::vector<double> run_dense(const mcvqe::Circuit& c, std::vector<double> v) {
  for (const auto& g : c.gates()) v = gate_dense(g, c.n_qubits()) * std::span<const double>(v);
  return v;
}

/// Single-site excitation configurations in CIS order, site 0 the most
/// significant bit.
inline std::vector<double> embed_cis(int n, std::span<const double> c) {
  std::vector<double> v(std::size_t{1} << n, 0.0);
  v[0] = c[0];
  for (int a = 0; a < n; ++a) v[std::size_t{1} << (n - 1 - a)] = c[a + 1];
  return v;
}

/// Dense entangler as the ordered product of lifted 4x4 blocks.
inline Matrix dense_entangler(const mcvqe::EntanglerParams& params, int n) {
  const auto pairs = params.layout.pairs();
  Matrix u = eye(std::size_t{1} << n);
  for (int layer = 0; layer < params.n_layers; ++layer)
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const Matrix b = from_mat4(mcvqe::so4_block(params.parametrization, params.block(layer, k)));
      u = lift2(b, pairs[k].first, pairs[k].second, n) * u;
    }
  return u;
}

inline mcvqe::Mat4 random_so4(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  mcvqe::Mat4 a{};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      a[i][j] = u(rng);
      a[j][i] = -a[i][j];
    }
  return mcvqe::numerics::expm_antisym4(a);
}

/// Random mix of every gate kind.
inline mcvqe::Circuit random_circuit(int n, int n_gates, std::mt19937_64& rng) {
  using mcvqe::Gate;
  std::uniform_int_distribution<int> kind(0, 7), q(0, n - 1);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  mcvqe::Circuit c(n);
  while (static_cast<int>(c.size()) < n_gates) {
    const int k = kind(rng), a = q(rng), b = q(rng);
    const bool two = k >= 4;
    if (two && (n < 2 || a == b)) continue;
    switch (k) {
      case 0: c.add(Gate::ry(a, ang(rng))); break;
      case 1: c.add(Gate::h(a)); break;
      case 2: c.add(Gate::x(a)); break;
      case 3: c.add(Gate::z(a)); break;
      case 4: c.add(Gate::cnot(a, b)); break;
      case 5: c.add(Gate::cz(a, b)); break;
      case 6: c.add(Gate::cfy(a, b, ang(rng))); break;
      default: c.add(Gate::so4(a, b, random_so4(rng))); break;
    }
  }
  return c;
}

}  // namespace oracle
