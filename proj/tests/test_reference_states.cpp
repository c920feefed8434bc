#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "mcvqe/error.hpp"
#include "mcvqe/reference_states.hpp"

using namespace mcvqe;

namespace {

std::vector<double> random_unit(int len, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(len);
  for (auto& x : v) x = g(rng);
  const double n = norm2(v);
  for (auto& x : v) x /= n;
  return v;
}

std::vector<MonomerData> uncoupled(const std::vector<double>& gaps) {
  std::vector<MonomerData> m(gaps.size());
  for (std::size_t a = 0; a < gaps.size(); ++a) {
    m[a].index = static_cast<int>(a);
    m[a].e_s1 = gaps[a];
    m[a].com = {10.0 * a, 0, 0};
  }
  return m;
}

}  // namespace

TEST_CASE("cis_matrix zero coupling and dense slice") {
  const auto m = uncoupled({1.0, 1.0});
  const Matrix c = cis_matrix(build_hamiltonian(m, Connectivity::linear(2)));
  CHECK(c(0, 0) == doctest::Approx(0.0));
  CHECK(c(1, 1) == doctest::Approx(1.0));
  CHECK(c(2, 2) == doctest::Approx(1.0));
  CHECK(c(0, 1) == 0.0);
  CHECK(c(1, 2) == 0.0);

  std::mt19937_64 rng(4);
  for (int n : {2, 3, 5}) {
    const auto mon = oracle::random_monomers(n, rng, 7.0, 1.5, 0.01);
    const auto conn = Connectivity::linear(n, n - 1);
    const auto h = build_hamiltonian(mon, conn);
    const Matrix dense = oracle::exciton_dense(mon, retained_pairs(conn, mon));
    const Matrix cm = cis_matrix(h);
    CHECK(cm == cm.transposed());
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j)
        CHECK(std::abs(cm(i, j) - dense(cis_configuration(n, i), cis_configuration(n, j))) < 1e-13);
  }
}

TEST_CASE("solve_cis") {
  const auto m = uncoupled({0.3, 0.1, 0.2});
  const auto s = solve_cis(build_hamiltonian(m, Connectivity::linear(3)));
  CHECK(s.energies[0] == doctest::Approx(0.0));
  CHECK(s.energies[1] == doctest::Approx(0.1));
  CHECK(s.energies[2] == doctest::Approx(0.2));
  CHECK(s.energies[3] == doctest::Approx(0.3));
  CHECK(s.vectors(0, 0) == doctest::Approx(1.0));
  CHECK(s.vectors(2, 1) == doctest::Approx(1.0));
  CHECK(s.vectors(3, 2) == doctest::Approx(1.0));
  CHECK(s.vectors(1, 3) == doctest::Approx(1.0));

  // Two equal sites coupled only through X_a X_b: single excitations split by ±c.
  ExcitonHamiltonian h;
  h.n_sites = 2;
  h.z = {-0.5, -0.5};
  h.x = {0.0, 0.0};
  h.e_scalar = 1.0;
  h.pairs.push_back({{1, 0}, 0.02, 0.0, 0.0, 0.0});
  const auto two = solve_cis(h);
  CHECK(two.energies[1] == doctest::Approx(0.98));
  CHECK(two.energies[2] == doctest::Approx(1.02));

  std::mt19937_64 rng(8);
  const auto mon = oracle::random_monomers(6, rng, 7.0, 2.0, 0.01);
  const auto hr = build_hamiltonian(mon, Connectivity::linear(6, 5));
  const auto sol = solve_cis(hr);
  const Matrix cm = cis_matrix(hr);
  for (int k = 0; k <= 6; ++k) {
    const auto v = sol.vector(k);
    const auto mv = cm * std::span<const double>(v);
    double r = 0;
    for (int i = 0; i <= 6; ++i) r += std::pow(mv[i] - sol.energies[k] * v[i], 2);
    CHECK(std::sqrt(r) < 1e-10);
    for (double x : v)
      if (std::abs(x) > 1e-10) {
        CHECK(x > 0);
        break;
      }
  }
}

TEST_CASE("cis_angles conventions and round trip") {
  const auto pure = cis_angles(std::vector<double>{1, 0, 0, 0});
  CHECK(pure.pump == 0.0);
  for (double a : pure.chain) CHECK(a == 0.0);

  const double r = 1 / std::sqrt(2.0);
  const auto w = cis_angles(std::vector<double>{0, r, r});
  CHECK(w.pump == doctest::Approx(std::numbers::pi / 2));
  CHECK(w.chain[0] == doctest::Approx(std::numbers::pi / 4));

  std::mt19937_64 rng(12);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 10;
    const auto v = random_unit(n + 1, rng);
    worst = std::max(worst, oracle::max_abs_diff(cis_coefficients(cis_angles(v)), v));
  }
  CHECK(worst < 1e-10);
  CHECK_THROWS_AS(cis_angles(std::vector<double>{0.5, 0.5}), Error);
}

TEST_CASE("cis_prep_circuit") {
  const Circuit c0 = cis_prep_circuit(cis_angles(std::vector<double>{1, 0, 0}));
  const StateVector s0 = apply_circuit(StateVector(2), c0);
  CHECK(s0[0] == 1.0);

  std::mt19937_64 rng(31);
  const auto v = random_unit(6, rng);
  const Circuit c = cis_prep_circuit(cis_angles(v));
  int ry = 0, cfy = 0, cnot = 0;
  for (const auto& g : c.gates()) {
    ry += g.kind == GateKind::Ry;
    cfy += g.kind == GateKind::CFy;
    cnot += g.kind == GateKind::CNOT;
  }
  CHECK(ry == 1);
  CHECK(cfy == 4);
  CHECK(cnot == 10);
  CHECK(static_cast<int>(c.size()) == 15);

  std::vector<double> e(32, 0.0);
  e[0] = 1.0;
  const auto amps = oracle::run_dense(c, e);
  for (Config k = 0; k < 32; ++k) {
    double expect = 0.0;
    for (int i = 0; i <= 5; ++i)
      if (cis_configuration(5, i) == k) expect = v[i];
    CHECK(std::abs(amps[k] - expect) < 1e-10);
  }
}

TEST_CASE("prepared CIS states are orthonormal") {
  std::mt19937_64 rng(44);
  for (int n = 2; n <= 10; ++n) {
    const auto mon = oracle::random_monomers(n, rng);
    const auto sol = solve_cis(build_hamiltonian(mon, Connectivity::linear(n)));
    std::vector<StateVector> states;
    for (int k = 0; k <= n; ++k) states.push_back(prepare_cis_state(sol.vector(k)));
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b)
        CHECK(std::abs(inner_product(states[a], states[b]) - (a == b ? 1.0 : 0.0)) < 1e-10);
  }
}

TEST_CASE("interference_coeffs") {
  const std::vector<double> e0{1, 0, 0}, e1{0, 1, 0};
  const auto p = interference_coeffs(e0, e1, +1);
  CHECK(p[0] == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(p[1] == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(p[2] == 0.0);
  CHECK_THROWS_AS(interference_coeffs(e0, e0, +1), Error);

  std::mt19937_64 rng(2);
  const auto mon = oracle::random_monomers(4, rng);
  const auto sol = solve_cis(build_hamiltonian(mon, Connectivity::linear(4)));
  for (int sign : {+1, -1}) {
    const auto c = interference_coeffs(sol.vector(1), sol.vector(3), sign);
    CHECK(norm2(c) == doctest::Approx(1.0));
    const StateVector s = prepare_cis_state(c);
    const StateVector a = prepare_cis_state(sol.vector(1));
    const StateVector b = prepare_cis_state(sol.vector(3));
    for (std::size_t k = 0; k < s.dim(); ++k)
      CHECK(std::abs(s[k] - (a[k] + sign * b[k]) / std::sqrt(2.0)) < 1e-10);
  }
}
