#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "mcvqe/entangler.hpp"
#include "mcvqe/error.hpp"
#include "mcvqe/numerics.hpp"

using namespace mcvqe;

namespace {

SixAngles random_six(std::mt19937_64& rng, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  SixAngles t;
  for (auto& x : t) x = u(rng);
  return t;
}

Mat4 taylor_exp(const Mat4& a) {
  Mat4 sum = identity4(), term = identity4();
  for (int k = 1; k < 30; ++k) {
    term = matmul(term, a);
    for (auto& row : term)
      for (double& x : row) x /= k;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) sum[i][j] += term[i][j];
  }
  return sum;
}

double max_diff(const Mat4& a, const Mat4& b) {
  double m = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
  return m;
}

Mat4 to_mat4(const Matrix& m) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = m(i, j);
  return r;
}

// Levenberg-Marquardt on the 16 entries of G(θ) − T with a finite-difference Jacobian.
double fit_gate_native(const Mat4& target, std::mt19937_64& rng) {
  auto residual = [&](const SixAngles& t) {
    const Mat4 g = gate_native_matrix(t);
    std::array<double, 16> r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r[4 * i + j] = g[i][j] - target[i][j];
    return r;
  };
  auto cost = [](const std::array<double, 16>& r) {
    double s = 0;
    for (double x : r) s += x * x;
    return s;
  };
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  double best = 1e9;
  for (int restart = 0; restart < 200 && best > 1e-8; ++restart) {
    SixAngles t;
    for (auto& x : t) x = u(rng);
    double lambda = 1e-3;
    auto r = residual(t);
    double c = cost(r);
    for (int it = 0; it < 300 && c > 1e-24; ++it) {
      double jac[16][6];
      for (int k = 0; k < 6; ++k) {
        SixAngles tp = t, tm = t;
        tp[k] += 1e-6;
        tm[k] -= 1e-6;
        const auto rp = residual(tp), rm = residual(tm);
        for (int i = 0; i < 16; ++i) jac[i][k] = (rp[i] - rm[i]) / 2e-6;
      }
      Matrix jtj(6, 6);
      std::vector<double> jtr(6, 0.0);
      for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b)
          for (int i = 0; i < 16; ++i) jtj(a, b) += jac[i][a] * jac[i][b];
        for (int i = 0; i < 16; ++i) jtr[a] += jac[i][a] * r[i];
      }
      bool improved = false;
      while (!improved && lambda < 1e12) {
        Matrix m = jtj;
        for (int a = 0; a < 6; ++a) m(a, a) += lambda * (1.0 + jtj(a, a));
        const auto e = numerics::eigh(m);
        SixAngles step{};
        for (int k = 0; k < 6; ++k) {
          double proj = 0;
          for (int a = 0; a < 6; ++a) proj += e.vectors(a, k) * jtr[a];
          for (int a = 0; a < 6; ++a) step[a] -= e.vectors(a, k) * proj / e.values[k];
        }
        SixAngles trial = t;
        for (int a = 0; a < 6; ++a) trial[a] += step[a];
        const auto rt = residual(trial);
        const double ct = cost(rt);
        if (ct < c) {
          t = trial;
          r = rt;
          c = ct;
          lambda = std::max(lambda / 10, 1e-12);
          improved = true;
        } else {
          lambda *= 10;
        }
      }
      if (!improved) break;
    }
    double worst = 0;
    for (double x : r) worst = std::max(worst, std::abs(x));
    best = std::min(best, worst);
  }
  return best;
}

}  // namespace

TEST_CASE("so4_from_antisym") {
  CHECK(max_diff(so4_from_antisym({}), identity4()) == 0.0);

  const double h = std::numbers::pi / 2;
  const Mat4 r = so4_from_antisym({h, 0, 0, 0, 0, 0});
  Mat4 g{};
  g[0][1] = h;
  g[1][0] = -h;
  CHECK(max_diff(r, taylor_exp(g)) < 1e-13);
  // Column 0 (image of e_0) is −e_1.
  CHECK(std::abs(r[1][0] + 1.0) < 1e-13);
  CHECK(std::abs(r[0][1] - 1.0) < 1e-13);

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const Mat4 m = so4_from_antisym(random_six(rng));
    CHECK(orthogonality_error(m) < 1e-12);
    CHECK(std::abs(det4(m) - 1.0) < 1e-12);
  }
}

TEST_CASE("Pauli generators are the Kronecker products") {
  using namespace oracle;
  const auto g = pauli_generators();
  const Matrix expect[6] = {kron(eye(2), pauli_w()),     kron(pauli_w(), eye(2)),
                            kron(pauli_x(), pauli_w()),  kron(pauli_w(), pauli_x()),
                            kron(pauli_z(), pauli_w()),  kron(pauli_w(), pauli_z())};
  for (int k = 0; k < 6; ++k) CHECK(max_diff(g[k], to_mat4(expect[k])) == 0.0);
}

TEST_CASE("so4_from_pauli_angles") {
  CHECK(max_diff(so4_from_pauli_angles({}), identity4()) == 0.0);

  const double t = 0.7;
  const Mat4 iy = so4_from_pauli_angles({t, 0, 0, 0, 0, 0});
  CHECK(std::abs(iy[0][0] - std::cos(t)) < 1e-14);
  CHECK(std::abs(iy[0][1] + std::sin(t)) < 1e-14);
  CHECK(std::abs(iy[1][0] - std::sin(t)) < 1e-14);
  CHECK(std::abs(iy[2][2] - std::cos(t)) < 1e-14);
  CHECK(std::abs(iy[2][3] + std::sin(t)) < 1e-14);
  CHECK(std::abs(iy[0][2]) < 1e-15);

  std::mt19937_64 rng(2);
  const auto gens = pauli_generators();
  for (int trial = 0; trial < 100; ++trial) {
    const SixAngles th = random_six(rng);
    const Mat4 m = so4_from_pauli_angles(th);
    CHECK(orthogonality_error(m) < 1e-12);
    CHECK(max_diff(m, so4_from_antisym(map_pauli_to_antisym(th))) < 1e-12);
  }
  // Small angles keep the plain series accurate.
  for (int trial = 0; trial < 100; ++trial) {
    const SixAngles th = random_six(rng, 0.3);
    Mat4 gsum{};
    for (int k = 0; k < 6; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) gsum[i][j] += th[k] * gens[k][i][j];
    CHECK(max_diff(so4_from_pauli_angles(th), taylor_exp(gsum)) < 1e-13);
  }
}

TEST_CASE("Pauli and antisymmetric maps") {
  const SixAngles zero{};
  CHECK(map_pauli_to_antisym(zero) == zero);
  const SixAngles a = map_pauli_to_antisym({1, 0, 0, 0, 0, 0});
  CHECK(a == SixAngles{-1, 0, 0, 0, 0, -1});

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const SixAngles th = random_six(rng);
    const SixAngles back = map_antisym_to_pauli(map_pauli_to_antisym(th));
    for (int k = 0; k < 6; ++k) CHECK(std::abs(back[k] - th[k]) <= 1e-15 * 8);
  }
}

TEST_CASE("gate_native circuit") {
  CHECK(max_diff(gate_native_matrix({}), identity4()) < 1e-15);

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const SixAngles th = random_six(rng, std::numbers::pi);
    const Mat4 m = gate_native_matrix(th);
    CHECK(orthogonality_error(m) < 1e-12);
    CHECK(std::abs(det4(m) - 1.0) < 1e-12);
    // Same operator as simulating the circuit on each basis state.
    const Circuit c = gate_native_circuit(th, {0, 1}, 2);
    for (int col = 0; col < 4; ++col) {
      const StateVector s = apply_circuit(StateVector::basis(2, col), c);
      for (int row = 0; row < 4; ++row) CHECK(std::abs(s[row] - m[row][col]) < 1e-14);
    }
  }
}

TEST_CASE("gate_native reaches random SO(4) targets") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Mat4 target = so4_from_antisym(random_six(rng, std::numbers::pi));
    CHECK(fit_gate_native(target, rng) < 1e-8);
  }
}

TEST_CASE("entangler layouts") {
  const auto lin4 = EntanglerLayout::brick(4, false);
  CHECK(lin4.pairs() == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}, {1, 2}});
  const auto p4 = EntanglerParams::zeros(lin4, 1, Parametrization::Pauli);
  CHECK(p4.n_params() == 18);
  CHECK(build_entangler_circuit(p4).size() == 3);

  const auto ring18 = EntanglerLayout::brick(18, true);
  CHECK(ring18.n_pairs() == 18);
  CHECK(ring18.sublayers.size() == 2);
  CHECK(EntanglerParams::zeros(ring18, 1, Parametrization::Pauli).n_params() == 108);

  const auto ring5 = EntanglerLayout::brick(5, true);
  CHECK(ring5.sublayers.size() == 3);
  CHECK(ring5.sublayers[2] == std::vector<std::pair<int, int>>{{4, 0}});
  CHECK(EntanglerLayout::brick(2, true).n_pairs() == 1);

  const auto conn = Connectivity::linear(5, 2);
  const std::vector<SitePair> pairs{{1, 0}, {2, 1}, {3, 2}, {4, 3}, {2, 0}, {3, 1}, {4, 2}};
  const auto fc = EntanglerLayout::from_connectivity(conn, pairs);
  CHECK(fc.n_pairs() == 7);
  CHECK(fc.sublayers[0] == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
  CHECK_NOTHROW(fc.validate());

  EntanglerLayout bad;
  bad.n_qubits = 3;
  bad.sublayers = {{{0, 1}, {1, 2}}};
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("zero entangler is the identity") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  for (auto p : {Parametrization::Antisym, Parametrization::Pauli, Parametrization::GateNative}) {
    const auto params = EntanglerParams::zeros(EntanglerLayout::brick(5, true), 2, p);
    std::vector<double> v(32);
    for (auto& x : v) x = g(rng);
    const StateVector s = apply_circuit(StateVector(5, v), build_entangler_circuit(params));
    CHECK(oracle::max_abs_diff(s.amplitudes(), v) < 1e-15);
  }
  CHECK(parametrization_from_string(to_string(Parametrization::GateNative)) ==
        Parametrization::GateNative);
  CHECK_THROWS_AS(parametrization_from_string("su4"), Error);
}

TEST_CASE("entangler circuit matches per-block dense product") {
  std::mt19937_64 rng(7);
  auto params = EntanglerParams::zeros(EntanglerLayout::brick(4, true), 1, Parametrization::Pauli);
  std::uniform_real_distribution<double> u(-1, 1);
  for (auto& x : params.values) x = u(rng);
  const Circuit c = build_entangler_circuit(params);
  const auto pairs = params.layout.pairs();
  Matrix total = Matrix::identity(16);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const Matrix b = oracle::from_mat4(so4_from_pauli_angles(params.block(0, k)));
    total = oracle::lift2(b, pairs[k].first, pairs[k].second, 4) * total;
  }
  std::vector<double> v(16);
  for (auto& x : v) x = u(rng);
  const StateVector s = apply_circuit(StateVector(4, v), c);
  CHECK(oracle::max_abs_diff(s.amplitudes(), total * std::span<const double>(v)) < 1e-13);
}
