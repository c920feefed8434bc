#include "mcvqe/simulator.hpp"

#include <cmath>

#include "mcvqe/error.hpp"

namespace mcvqe {

std::string to_string(GateKind kind) {
  switch (kind) {
    case GateKind::Ry: return "Ry";
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
    case GateKind::CFy: return "CFy";
    case GateKind::SO4: return "SO4";
  }
  return "?";
}

Gate Gate::so4(int first, int second, const Mat4& m) {
  require(orthogonality_error(m) < 1e-12, ErrorKind::InvalidArgument,
          "so4 gate: block is not orthogonal");
  require(std::abs(det4(m) - 1.0) < 1e-12, ErrorKind::InvalidArgument,
          "so4 gate: block determinant is not +1");
  Gate g{GateKind::SO4, first, second, 0.0, m};
  return g;
}

Mat2 Gate::matrix2() const {
  switch (kind) {
    case GateKind::Ry: {
      const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
      return {{{c, -s}, {s, c}}};
    }
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      return {{{r, r}, {r, -r}}};
    }
    case GateKind::X: return {{{0.0, 1.0}, {1.0, 0.0}}};
    case GateKind::Z: return {{{1.0, 0.0}, {0.0, -1.0}}};
    default: fail(ErrorKind::InvalidArgument, "gate: " + to_string(kind) + " is not single-qubit");
  }
}

Mat4 Gate::matrix4() const {
  Mat4 m = identity4();
  switch (kind) {
    case GateKind::CNOT:
      m[2][2] = 0.0; m[2][3] = 1.0;
      m[3][2] = 1.0; m[3][3] = 0.0;
      return m;
    case GateKind::CZ:
      m[3][3] = -1.0;
      return m;
    case GateKind::CFy: {
      const double c = std::cos(angle), s = std::sin(angle);
      m[2][2] = c; m[2][3] = s;
      m[3][2] = s; m[3][3] = -c;
      return m;
    }
    case GateKind::SO4: return block;
    default: fail(ErrorKind::InvalidArgument, "gate: " + to_string(kind) + " is not two-qubit");
  }
}

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
  require(n_qubits >= 1 && n_qubits <= kMaxQubits, ErrorKind::CapExceeded,
          "circuit: qubit count " + std::to_string(n_qubits) + " outside [1, " +
              std::to_string(kMaxQubits) + "]");
}

Circuit& Circuit::add(const Gate& g) {
  require(g.q0 >= 0 && g.q0 < n_qubits_, ErrorKind::InvalidArgument, "circuit: qubit out of range");
  const bool two = g.kind == GateKind::CNOT || g.kind == GateKind::CZ ||
                   g.kind == GateKind::CFy || g.kind == GateKind::SO4;
  if (two) {
    require(g.q1 >= 0 && g.q1 < n_qubits_, ErrorKind::InvalidArgument,
            "circuit: qubit out of range");
    require(g.q0 != g.q1, ErrorKind::InvalidArgument, "circuit: two-qubit gate on one qubit");
  } else {
    require(g.q1 < 0, ErrorKind::InvalidArgument, "circuit: single-qubit gate with two qubits");
  }
  gates_.push_back(g);
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  require(other.n_qubits_ == n_qubits_, ErrorKind::DimensionMismatch,
          "circuit: appending circuit of different width");
  gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
  return *this;
}

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  require(n_qubits >= 1 && n_qubits <= kMaxQubits, ErrorKind::CapExceeded,
          "state: qubit count " + std::to_string(n_qubits) + " outside [1, " +
              std::to_string(kMaxQubits) + "]");
  amps_.assign(std::size_t{1} << n_qubits, 0.0);
  amps_[0] = 1.0;
}

StateVector::StateVector(int n_qubits, std::vector<double> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  require(n_qubits >= 1 && n_qubits <= kMaxQubits, ErrorKind::CapExceeded,
          "state: qubit count outside supported range");
  require(amps_.size() == (std::size_t{1} << n_qubits), ErrorKind::DimensionMismatch,
          "state: amplitude count does not match 2^N");
}

StateVector StateVector::basis(int n_qubits, Config index) {
  StateVector s(n_qubits);
  require(index < s.dim(), ErrorKind::DimensionMismatch, "state: basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

double StateVector::norm() const { return norm2(amps_); }

namespace {

// Index with a zero inserted at bit position p.
inline std::size_t insert_zero(std::size_t k, int p) {
  const std::size_t low = k & ((std::size_t{1} << p) - 1);
  return ((k >> p) << (p + 1)) | low;
}

void apply_single(std::span<double> a, int pos, const Mat2& mat) {
  const Mat2 m = mat;
  const std::size_t half = a.size() / 2;
  const std::size_t stride = std::size_t{1} << pos;
  for (std::size_t k = 0; k < half; ++k) {
    const std::size_t i0 = insert_zero(k, pos);
    const std::size_t i1 = i0 | stride;
    const double x0 = a[i0], x1 = a[i1];
    a[i0] = m[0][0] * x0 + m[0][1] * x1;
    a[i1] = m[1][0] * x0 + m[1][1] * x1;
  }
}

void apply_two(std::span<double> a, int pos_hi_qubit, int pos_lo_qubit, const Mat4& mat) {
  // pos_hi_qubit: bit position of the block's more significant qubit.
  double m[4][4];
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m[r][c] = mat[r][c];
  const std::size_t quarter = a.size() / 4;
  const int p_small = std::min(pos_hi_qubit, pos_lo_qubit);
  const int p_large = std::max(pos_hi_qubit, pos_lo_qubit);
  const std::size_t m0 = std::size_t{1} << pos_hi_qubit;
  const std::size_t m1 = std::size_t{1} << pos_lo_qubit;
  double* d = a.data();
  for (std::size_t k = 0; k < quarter; ++k) {
    const std::size_t i0 = insert_zero(insert_zero(k, p_small), p_large);
    const std::size_t i1 = i0 | m1, i2 = i0 | m0, i3 = i0 | m0 | m1;
    const double x0 = d[i0], x1 = d[i1], x2 = d[i2], x3 = d[i3];
    d[i0] = m[0][0] * x0 + m[0][1] * x1 + m[0][2] * x2 + m[0][3] * x3;
    d[i1] = m[1][0] * x0 + m[1][1] * x1 + m[1][2] * x2 + m[1][3] * x3;
    d[i2] = m[2][0] * x0 + m[2][1] * x1 + m[2][2] * x2 + m[2][3] * x3;
    d[i3] = m[3][0] * x0 + m[3][1] * x1 + m[3][2] * x2 + m[3][3] * x3;
  }
}

}  // namespace

void apply_gate(StateVector& state, const Gate& gate) {
  const int n = state.n_qubits();
  require(gate.q0 >= 0 && gate.q0 < n && gate.q1 < n, ErrorKind::DimensionMismatch,
          "apply_gate: qubit index exceeds state width");
  auto a = state.amplitudes();
  const int p0 = n - 1 - gate.q0;
  switch (gate.kind) {
    case GateKind::Ry:
    case GateKind::H:
    case GateKind::X:
    case GateKind::Z:
      apply_single(a, p0, gate.matrix2());
      return;
    case GateKind::CNOT: {
      const std::size_t mc = std::size_t{1} << p0;
      const std::size_t mt = std::size_t{1} << (n - 1 - gate.q1);
      for (std::size_t i = 0; i < a.size(); ++i)
        if ((i & mc) && !(i & mt)) std::swap(a[i], a[i | mt]);
      return;
    }
    case GateKind::CZ: {
      const std::size_t mask = (std::size_t{1} << p0) | (std::size_t{1} << (n - 1 - gate.q1));
      for (std::size_t i = 0; i < a.size(); ++i)
        if ((i & mask) == mask) a[i] = -a[i];
      return;
    }
    case GateKind::CFy:
    case GateKind::SO4:
      apply_two(a, p0, n - 1 - gate.q1, gate.matrix4());
      return;
  }
}

void apply_circuit_inplace(StateVector& state, const Circuit& circuit) {
  require(state.n_qubits() == circuit.n_qubits(), ErrorKind::DimensionMismatch,
          "apply_circuit: state and circuit widths differ");
  for (const auto& g : circuit.gates()) apply_gate(state, g);
}

StateVector apply_circuit(StateVector state, const Circuit& circuit) {
  apply_circuit_inplace(state, circuit);
  return state;
}

double expectation(const StateVector& state, std::span<const PauliTerm> terms) {
  const CompiledOperator op(terms, state.n_qubits());
  return op.expectation(state.amplitudes());
}

double expectation(const StateVector& state, const CompiledOperator& op) {
  require(op.n_sites() == state.n_qubits(), ErrorKind::DimensionMismatch,
          "expectation: operator and state widths differ");
  return op.expectation(state.amplitudes());
}

double inner_product(const StateVector& a, const StateVector& b) {
  require(a.dim() == b.dim(), ErrorKind::DimensionMismatch, "inner_product: dimension mismatch");
  return dot(a.amplitudes(), b.amplitudes());
}

}  // namespace mcvqe
