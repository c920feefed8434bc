#include "mcvqe/driver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "mcvqe/error.hpp"
#include "mcvqe/units.hpp"

namespace mcvqe {

std::string to_string(OptimizerKind k) { return k == OptimizerKind::Lbfgs ? "lbfgs" : "powell"; }

OptimizerKind optimizer_from_string(const std::string& s) {
  if (s == "lbfgs") return OptimizerKind::Lbfgs;
  if (s == "powell") return OptimizerKind::Powell;
  fail(ErrorKind::InvalidArgument, "unknown optimizer '" + s + "'");
}

void McVqeConfig::validate(int n_sites) const {
  const int k = resolved_states(n_sites);
  require(k >= 1 && k <= n_sites + 1, ErrorKind::InvalidArgument,
          "mcvqe: number of states must lie in [1, N+1]");
  require(fd_step > 0.0, ErrorKind::InvalidArgument, "mcvqe: fd step must be positive");
  require(gtol > 0.0, ErrorKind::InvalidArgument, "mcvqe: gradient tolerance must be positive");
  require(max_iter >= 0, ErrorKind::InvalidArgument, "mcvqe: max iterations must be >= 0");
  require(n_layers >= 1, ErrorKind::InvalidArgument, "mcvqe: layers must be >= 1");
  require(threads >= 1, ErrorKind::InvalidArgument, "mcvqe: threads must be >= 1");
}

McVqeProblem::McVqeProblem(const ExcitonHamiltonian& h, const Connectivity& conn,
                           const std::vector<SitePair>& pairs, const McVqeConfig& config)
    : McVqeProblem(h, solve_cis(h), EntanglerLayout::from_connectivity(conn, pairs), config) {}

McVqeProblem::McVqeProblem(const ExcitonHamiltonian& h, CisSolution cis, EntanglerLayout layout,
                           const McVqeConfig& config)
    : h_(h), cis_(std::move(cis)), layout_(std::move(layout)), config_(config) {
  config_.validate(h_.n_sites);
  require(cis_.n_sites == h_.n_sites && layout_.n_qubits == h_.n_sites,
          ErrorKind::DimensionMismatch, "mcvqe: CIS, layout and Hamiltonian widths differ");
  layout_.validate();
  pairs_ = layout_.pairs();
  n_states_ = config_.resolved_states(h_.n_sites);
  const auto terms = h_.terms();
  op_ = CompiledOperator(terms, h_.n_sites);
  prepare_references();
}

template <class F>
void McVqeProblem::for_each_state(F&& body) const {
  const int workers = std::min(config_.threads, n_states_);
  if (workers <= 1) {
    for (int t = 0; t < n_states_; ++t) body(t);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int t = w; t < n_states_; t += workers) body(t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void McVqeProblem::prepare_references() {
  references_.resize(n_states_);
  for_each_state([&](int t) {
    const auto c = cis_.vector(t);
    references_[t] = prepare_cis_state(c);
  });
}

EntanglerParams McVqeProblem::zero_params() const {
  return EntanglerParams::zeros(layout_, config_.n_layers, config_.parametrization);
}

EntanglerParams McVqeProblem::params(std::span<const double> values) const {
  auto p = zero_params();
  require(values.size() == p.values.size(), ErrorKind::DimensionMismatch,
          "mcvqe: expected " + std::to_string(p.values.size()) + " parameters, got " +
              std::to_string(values.size()));
  p.values.assign(values.begin(), values.end());
  return p;
}

std::vector<Mat4> McVqeProblem::block_matrices(std::span<const double> values) const {
  const auto p = params(values);
  std::vector<Mat4> blocks;
  blocks.reserve(pairs_.size() * config_.n_layers);
  for (int layer = 0; layer < config_.n_layers; ++layer)
    for (std::size_t k = 0; k < pairs_.size(); ++k)
      blocks.push_back(so4_block(p.parametrization, p.block(layer, k)));
  return blocks;
}

void McVqeProblem::apply_blocks(StateVector& s, const std::vector<Mat4>& blocks,
                                std::size_t first) const {
  for (std::size_t b = first; b < blocks.size(); ++b) {
    const auto& pq = pairs_[b % pairs_.size()];
    apply_gate(s, Gate::so4(pq.first, pq.second, blocks[b]));
  }
}

double McVqeProblem::diagonal_element(int theta, std::span<const double> values) const {
  require(theta >= 0 && theta < n_states_, ErrorKind::InvalidArgument,
          "mcvqe: state index out of range");
  StateVector s = references_[theta];
  apply_blocks(s, block_matrices(values), 0);
  return op_.expectation(s.amplitudes());
}

double McVqeProblem::state_averaged_energy(std::span<const double> values) const {
  const auto blocks = block_matrices(values);
  std::vector<double> e(n_states_);
  for_each_state([&](int t) {
    StateVector s = references_[t];
    apply_blocks(s, blocks, 0);
    e[t] = op_.expectation(s.amplitudes());
  });
  double sum = 0.0;
  for (double v : e) sum += v;
  return sum / n_states_;
}

std::vector<double> McVqeProblem::fd_gradient(std::span<const double> values, double step) const {
  require(step > 0.0, ErrorKind::InvalidArgument, "fd_gradient: step must be positive");
  const auto base = block_matrices(values);
  const auto p = params(values);
  const std::size_t n = values.size();
  std::vector<std::vector<double>> diff(n_states_, std::vector<double>(n, 0.0));

  for_each_state([&](int t) {
    StateVector prefix = references_[t];
    StateVector work;
    for (std::size_t b = 0; b < base.size(); ++b) {
      const std::size_t layer = b / pairs_.size(), k = b % pairs_.size();
      const auto& pq = pairs_[k];
      SixAngles angles = p.block(layer, k);
      for (int i = 0; i < 6; ++i) {
        const double saved = angles[i];
        double e[2];
        for (int side = 0; side < 2; ++side) {
          angles[i] = saved + (side == 0 ? step : -step);
          work = prefix;
          apply_gate(work, Gate::so4(pq.first, pq.second, so4_block(p.parametrization, angles)));
          apply_blocks(work, base, b + 1);
          e[side] = op_.expectation(work.amplitudes());
        }
        angles[i] = saved;
        diff[t][6 * b + i] = e[0] - e[1];
      }
      apply_gate(prefix, Gate::so4(pq.first, pq.second, base[b]));
    }
  });

  std::vector<double> g(n, 0.0);
  for (int t = 0; t < n_states_; ++t)
    for (std::size_t i = 0; i < n; ++i) g[i] += diff[t][i];
  for (double& v : g) v /= 2.0 * step * n_states_;
  return g;
}

StateVector McVqeProblem::entangled_state(std::span<const double> coeffs,
                                          std::span<const double> values) const {
  StateVector s = prepare_cis_state(coeffs);
  apply_blocks(s, block_matrices(values), 0);
  return s;
}

std::vector<Matrix> McVqeProblem::reference_matrices(std::span<const double> values,
                                                     std::span<const CompiledOperator> ops) const {
  const auto blocks = block_matrices(values);
  const int k = n_states_;
  std::vector<Matrix> out(ops.size(), Matrix(k, k));
  auto measure = [&](StateVector& s, std::vector<double>& e) {
    apply_blocks(s, blocks, 0);
    for (std::size_t o = 0; o < ops.size(); ++o) e[o] = ops[o].expectation(s.amplitudes());
  };
  for_each_state([&](int a) {
    std::vector<double> e(ops.size()), ep(ops.size()), em(ops.size());
    StateVector s = references_[a];
    measure(s, e);
    for (std::size_t o = 0; o < ops.size(); ++o) out[o](a, a) = e[o];
    const auto va = cis_.vector(a);
    for (int b = a + 1; b < k; ++b) {
      const auto vb = cis_.vector(b);
      StateVector plus = prepare_cis_state(interference_coeffs(va, vb, +1));
      StateVector minus = prepare_cis_state(interference_coeffs(va, vb, -1));
      measure(plus, ep);
      measure(minus, em);
      for (std::size_t o = 0; o < ops.size(); ++o) {
        const double x = 0.5 * (ep[o] - em[o]);
        out[o](a, b) = x;
        out[o](b, a) = x;
      }
    }
  });
  return out;
}

SubspaceResult diagonalize_subspace(Matrix h_sub) {
  auto eig = numerics::eigh(h_sub);
  canonicalize_columns(eig.vectors);
  return {std::move(h_sub), std::move(eig.values), std::move(eig.vectors)};
}

SubspaceResult assemble_subspace(const McVqeProblem& problem, std::span<const double> values) {
  const CompiledOperator* op = &problem.compiled_hamiltonian();
  auto m = problem.reference_matrices(values, std::span(op, 1));
  return diagonalize_subspace(std::move(m[0]));
}

namespace {

Matrix rotate(const Matrix& m, const Matrix& v) { return v.transposed() * m * v; }

}  // namespace

Matrix contracted_operator(const McVqeProblem& problem, std::span<const double> values,
                           std::span<const PauliTerm> terms, const Matrix& v) {
  const CompiledOperator op(terms, problem.n_sites());
  auto m = problem.reference_matrices(values, std::span(&op, 1));
  require(v.rows() == m[0].rows() && v.cols() == m[0].cols(), ErrorKind::DimensionMismatch,
          "contracted_operator: eigenvector matrix has the wrong shape");
  return rotate(m[0], v);
}

numerics::OptimizeResult optimize_entangler(const McVqeProblem& problem) {
  const auto& cfg = problem.config();
  numerics::OptimizerOptions opts;
  opts.max_iter = cfg.max_iter;
  opts.gtol = cfg.gtol;
  opts.fd_step = cfg.fd_step;
  opts.on_iterate = cfg.on_iterate;
  std::vector<double> x0(problem.n_params(), 0.0);
  auto f = [&](std::span<const double> x) { return problem.state_averaged_energy(x); };
  if (cfg.optimizer == OptimizerKind::Powell) return numerics::powell(f, std::move(x0), opts);
  auto g = [&](std::span<const double> x) { return problem.fd_gradient(x, cfg.fd_step); };
  return numerics::lbfgs(f, g, std::move(x0), opts);
}

StateVector prepare_eigenstate(const McVqeProblem& problem, int theta,
                               std::span<const double> values, const Matrix& v) {
  const int k = problem.n_states();
  require(theta >= 0 && theta < k && static_cast<int>(v.rows()) == k &&
              static_cast<int>(v.cols()) == k,
          ErrorKind::DimensionMismatch, "prepare_eigenstate: bad state index or V shape");
  const auto& cv = problem.cis().vectors;
  std::vector<double> gamma(cv.rows(), 0.0);
  for (std::size_t r = 0; r < cv.rows(); ++r)
    for (int c = 0; c < k; ++c) gamma[r] += cv(r, c) * v(c, theta);
  const double nrm = norm2(gamma);
  for (double& g : gamma) g /= nrm;
  return problem.entangled_state(gamma, values);
}

std::vector<double> populations(const StateVector& state) {
  const int n = state.n_qubits();
  std::vector<double> p(n, 0.0);
  const auto a = state.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double w = a[i] * a[i];
    if (w == 0.0) continue;
    for (int s = 0; s < n; ++s)
      if (site_bit(i, n, s)) p[s] += w;
  }
  return p;
}

double fidelity(const StateVector& a, const StateVector& b) { return std::abs(inner_product(a, b)); }

double oscillator_strength(double delta_e, const Vec3& d) {
  if (!(delta_e > 0.0)) return 0.0;
  return 2.0 / 3.0 * delta_e * dot(d, d);
}

TransitionSet make_transitions(const std::vector<double>& energies,
                               const std::array<Matrix, 3>& dipoles,
                               std::vector<std::vector<double>> pops) {
  TransitionSet t;
  const std::size_t k = energies.size();
  t.energies = energies;
  t.populations = std::move(pops);
  t.excitation_ev.resize(k);
  t.transition_dipoles.resize(k);
  t.oscillator_strengths.resize(k, 0.0);
  t.degenerate.assign(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    const double de = energies[i] - energies[0];
    t.excitation_ev[i] = units::hartree_to_ev(de);
    t.transition_dipoles[i] = {dipoles[0](0, i), dipoles[1](0, i), dipoles[2](0, i)};
    if (i > 0) t.oscillator_strengths[i] = oscillator_strength(de, t.transition_dipoles[i]);
    for (std::size_t j = 0; j < k; ++j)
      if (j != i && std::abs(energies[i] - energies[j]) < 1e-8) t.degenerate[i] = true;
  }
  return t;
}

std::array<CompiledOperator, 3> compile_dipole(const DipoleOperator& dipole) {
  const int n = dipole.n_sites();
  std::array<CompiledOperator, 3> ops;
  for (int c = 0; c < 3; ++c) {
    const auto terms = dipole.component_terms(c);
    ops[c] = CompiledOperator(terms, n);
  }
  return ops;
}

TransitionSet transitions_from_states(const std::vector<double>& energies,
                                      const std::vector<StateVector>& states,
                                      const DipoleOperator& dipole) {
  require(energies.size() == states.size() && !states.empty(), ErrorKind::DimensionMismatch,
          "transitions: energy and state counts differ");
  const auto ops = compile_dipole(dipole);
  const std::size_t k = states.size();
  std::array<Matrix, 3> d{Matrix(k, k), Matrix(k, k), Matrix(k, k)};
  std::vector<std::vector<double>> pops;
  for (std::size_t j = 0; j < k; ++j) {
    for (int c = 0; c < 3; ++c)
      d[c](0, j) = ops[c].matrix_element(states[0].amplitudes(), states[j].amplitudes());
    pops.push_back(populations(states[j]));
  }
  return make_transitions(energies, d, std::move(pops));
}

McVqeRun evaluate_mcvqe(const McVqeProblem& problem, const DipoleOperator& dipole,
                        std::vector<double> values) {
  require(dipole.n_sites() == problem.n_sites(), ErrorKind::DimensionMismatch,
          "mcvqe: dipole operator width differs from Hamiltonian");
  McVqeRun run;
  run.params = problem.params(values);
  const auto dip = compile_dipole(dipole);
  const std::array<CompiledOperator, 4> ops{problem.compiled_hamiltonian(), dip[0], dip[1], dip[2]};
  auto m = problem.reference_matrices(values, ops);
  run.subspace = diagonalize_subspace(std::move(m[0]));
  const Matrix& v = run.subspace.v;
  const std::array<Matrix, 3> d{rotate(m[1], v), rotate(m[2], v), rotate(m[3], v)};
  std::vector<std::vector<double>> pops;
  for (int t = 0; t < problem.n_states(); ++t) {
    run.eigenstates.push_back(prepare_eigenstate(problem, t, values, v));
    pops.push_back(populations(run.eigenstates.back()));
  }
  run.transitions = make_transitions(run.subspace.energies, d, std::move(pops));
  return run;
}

McVqeRun run_mcvqe(const McVqeProblem& problem, const DipoleOperator& dipole) {
  auto opt = optimize_entangler(problem);
  auto run = evaluate_mcvqe(problem, dipole, opt.x);
  run.optimization = std::move(opt);
  return run;
}

CisRun run_cis(const ExcitonHamiltonian& h, const DipoleOperator& dipole, int n_states) {
  CisRun run;
  run.solution = solve_cis(h);
  const int k = n_states > 0 ? n_states : h.n_sites + 1;
  require(k >= 1 && k <= h.n_sites + 1, ErrorKind::InvalidArgument,
          "cis: number of states must lie in [1, N+1]");
  std::vector<double> e(run.solution.energies.begin(), run.solution.energies.begin() + k);
  for (int t = 0; t < k; ++t) run.states.push_back(prepare_cis_state(run.solution.vector(t)));
  run.transitions = transitions_from_states(e, run.states, dipole);
  return run;
}

}  // namespace mcvqe
