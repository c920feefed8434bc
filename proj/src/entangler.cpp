#include "mcvqe/entangler.hpp"

#include <algorithm>
#include <set>

#include "mcvqe/error.hpp"
#include "mcvqe/numerics.hpp"

namespace mcvqe {

namespace {

constexpr Mat2 kI2{{{1.0, 0.0}, {0.0, 1.0}}};
constexpr Mat2 kX2{{{0.0, 1.0}, {1.0, 0.0}}};
constexpr Mat2 kZ2{{{1.0, 0.0}, {0.0, -1.0}}};
constexpr Mat2 kW2{{{0.0, -1.0}, {1.0, 0.0}}};  // −iY

Mat2 ry2(double theta) {
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  return {{{c, -s}, {s, c}}};
}

std::pair<int, int> ordered(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace

std::string to_string(Parametrization p) {
  switch (p) {
    case Parametrization::Antisym: return "antisym";
    case Parametrization::Pauli: return "pauli";
    case Parametrization::GateNative: return "gate_native";
  }
  return "?";
}

Parametrization parametrization_from_string(const std::string& s) {
  if (s == "antisym") return Parametrization::Antisym;
  if (s == "pauli") return Parametrization::Pauli;
  if (s == "gate_native") return Parametrization::GateNative;
  fail(ErrorKind::InvalidArgument, "unknown parametrization '" + s + "'");
}

std::vector<std::pair<int, int>> EntanglerLayout::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (const auto& sub : sublayers) out.insert(out.end(), sub.begin(), sub.end());
  return out;
}

std::size_t EntanglerLayout::n_pairs() const {
  std::size_t n = 0;
  for (const auto& sub : sublayers) n += sub.size();
  return n;
}

void EntanglerLayout::validate() const {
  require(n_qubits >= 1, ErrorKind::InvalidArgument, "entangler layout: no qubits");
  std::set<std::pair<int, int>> seen;
  for (const auto& sub : sublayers) {
    std::vector<bool> busy(n_qubits, false);
    for (auto [p, q] : sub) {
      require(p >= 0 && q >= 0 && p < n_qubits && q < n_qubits && p != q,
              ErrorKind::InvalidArgument, "entangler layout: invalid qubit pair");
      require(!busy[p] && !busy[q], ErrorKind::InvalidArgument,
              "entangler layout: overlapping pairs within a sublayer");
      busy[p] = busy[q] = true;
      require(seen.insert(ordered(p, q)).second, ErrorKind::InvalidArgument,
              "entangler layout: duplicate pair");
    }
  }
}

EntanglerLayout EntanglerLayout::brick(int n_qubits, bool cyclic) {
  EntanglerLayout layout;
  layout.n_qubits = n_qubits;
  std::vector<std::pair<int, int>> even, odd;
  for (int k = 0; k + 1 < n_qubits; k += 2) even.emplace_back(k, k + 1);
  for (int k = 1; k + 1 < n_qubits; k += 2) odd.emplace_back(k, k + 1);
  std::vector<std::pair<int, int>> closing;
  if (cyclic && n_qubits > 2) {
    // Odd N leaves qubit N-1 busy in the second sublayer.
    if (n_qubits % 2 == 0) odd.emplace_back(n_qubits - 1, 0);
    else closing.emplace_back(n_qubits - 1, 0);
  }
  for (auto* sub : {&even, &odd, &closing})
    if (!sub->empty()) layout.sublayers.push_back(std::move(*sub));
  layout.validate();
  return layout;
}

EntanglerLayout EntanglerLayout::from_connectivity(const Connectivity& conn,
                                                   const std::vector<SitePair>& pairs) {
  const int n = conn.n_sites;
  std::set<std::pair<int, int>> wanted;
  for (const auto& p : pairs) wanted.insert(ordered(p.a, p.b));

  const EntanglerLayout base = brick(n, conn.topology == Topology::Cyclic);
  EntanglerLayout layout;
  layout.n_qubits = n;
  for (const auto& sub : base.sublayers) {
    std::vector<std::pair<int, int>> kept;
    for (auto pq : sub)
      if (wanted.erase(ordered(pq.first, pq.second))) kept.push_back(pq);
    if (!kept.empty()) layout.sublayers.push_back(std::move(kept));
  }
  // Longer-range pairs, first-fit into fresh sublayers.
  std::vector<std::vector<std::pair<int, int>>> extra;
  std::vector<std::vector<bool>> busy;
  for (auto pq : wanted) {
    std::size_t s = 0;
    while (s < extra.size() && (busy[s][pq.first] || busy[s][pq.second])) ++s;
    if (s == extra.size()) {
      extra.emplace_back();
      busy.emplace_back(n, false);
    }
    extra[s].push_back(pq);
    busy[s][pq.first] = busy[s][pq.second] = true;
  }
  for (auto& sub : extra) layout.sublayers.push_back(std::move(sub));
  layout.validate();
  return layout;
}

EntanglerParams EntanglerParams::zeros(EntanglerLayout layout, int n_layers, Parametrization p) {
  require(n_layers >= 1, ErrorKind::InvalidArgument, "entangler: n_layers must be >= 1");
  layout.validate();
  EntanglerParams params;
  params.values.assign(6 * layout.n_pairs() * static_cast<std::size_t>(n_layers), 0.0);
  params.layout = std::move(layout);
  params.n_layers = n_layers;
  params.parametrization = p;
  return params;
}

SixAngles EntanglerParams::block(std::size_t layer, std::size_t pair_index) const {
  const std::size_t offset = 6 * (layer * layout.n_pairs() + pair_index);
  require(offset + 6 <= values.size(), ErrorKind::DimensionMismatch,
          "entangler: parameter vector too short for layout");
  SixAngles out;
  std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(offset), 6, out.begin());
  return out;
}

Mat4 so4_from_antisym(const SixAngles& v) {
  const auto [a, b, c, d, e, f] = v;
  Mat4 g{};
  g[0][1] = a; g[0][2] = b; g[0][3] = c;
  g[1][2] = d; g[1][3] = e; g[2][3] = f;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j) g[i][j] = -g[j][i];
  return numerics::expm_antisym4(g);
}

std::array<Mat4, 6> pauli_generators() {
  // Order follows the angle tuple (IY, YI, XY, YX, ZY, YZ).
  return {kron(kI2, kW2), kron(kW2, kI2), kron(kX2, kW2),
          kron(kW2, kX2), kron(kZ2, kW2), kron(kW2, kZ2)};
}

Mat4 so4_from_pauli_angles(const SixAngles& theta) {
  const auto gens = pauli_generators();
  Mat4 g{};
  for (int k = 0; k < 6; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) g[i][j] += theta[k] * gens[k][i][j];
  return numerics::expm_antisym4(g);
}

SixAngles map_pauli_to_antisym(const SixAngles& t) {
  const double iy = t[0], yi = t[1], xy = t[2], yx = t[3], zy = t[4], yz = t[5];
  return {-(iy + zy), -(yi + yz), -(yx + xy), -(yx - xy), -(yi - yz), -(iy - zy)};
}

SixAngles map_antisym_to_pauli(const SixAngles& v) {
  const auto [a, b, c, d, e, f] = v;
  return {-0.5 * (a + f), -0.5 * (b + e), -0.5 * (c - d),
          -0.5 * (c + d), -0.5 * (a - f), -0.5 * (b - e)};
}

Circuit gate_native_circuit(const SixAngles& theta, std::pair<int, int> pair, int n_qubits) {
  const auto [p, q] = pair;
  Circuit c(n_qubits);
  c.add(Gate::ry(p, theta[0])).add(Gate::ry(q, theta[1])).add(Gate::cnot(p, q));
  c.add(Gate::ry(p, theta[2])).add(Gate::ry(q, theta[3])).add(Gate::cnot(p, q));
  c.add(Gate::ry(p, theta[4])).add(Gate::ry(q, theta[5]));
  return c;
}

Mat4 gate_native_matrix(const SixAngles& theta) {
  const Mat4 cnot = Gate::cnot(0, 1).matrix4();
  Mat4 m = kron(ry2(theta[0]), ry2(theta[1]));
  m = matmul(cnot, m);
  m = matmul(kron(ry2(theta[2]), ry2(theta[3])), m);
  m = matmul(cnot, m);
  return matmul(kron(ry2(theta[4]), ry2(theta[5])), m);
}

Mat4 so4_block(Parametrization p, const SixAngles& values) {
  switch (p) {
    case Parametrization::Antisym: return so4_from_antisym(values);
    case Parametrization::Pauli: return so4_from_pauli_angles(values);
    case Parametrization::GateNative: return gate_native_matrix(values);
  }
  fail(ErrorKind::InvalidArgument, "unknown parametrization");
}

Circuit build_entangler_circuit(const EntanglerParams& params) {
  params.layout.validate();
  const auto pairs = params.layout.pairs();
  require(params.values.size() == 6 * pairs.size() * static_cast<std::size_t>(params.n_layers),
          ErrorKind::DimensionMismatch, "entangler: parameter count does not match layout");
  Circuit c(params.layout.n_qubits);
  for (int layer = 0; layer < params.n_layers; ++layer)
    for (std::size_t k = 0; k < pairs.size(); ++k)
      c.add(Gate::so4(pairs[k].first, pairs[k].second,
                      so4_block(params.parametrization, params.block(layer, k))));
  return c;
}

}  // namespace mcvqe
