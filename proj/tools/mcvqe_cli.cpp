// mcvqe: exciton-model MC-VQE, CIS and FCI from the command line.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcvqe/driver.hpp"
#include "mcvqe/error.hpp"
#include "mcvqe/exact.hpp"
#include "mcvqe/io.hpp"
#include "mcvqe/spectrum.hpp"
#include "mcvqe/synth.hpp"
#include "mcvqe/units.hpp"

using namespace mcvqe;

namespace {

enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kIo = 3,
  kSchema = 4,
  kCap = 5,
  kInvalid = 6,
  kNotConverged = 7,
};

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Io: return kIo;
    case ErrorKind::Schema: return kSchema;
    case ErrorKind::CapExceeded: return kCap;
    case ErrorKind::NotConverged: return kNotConverged;
    case ErrorKind::InvalidArgument:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::DegenerateGeometry: return kInvalid;
  }
  return kFailure;
}

struct TopologyFlags {
  std::string topology;
  int neighbor_order = 0;
  double cutoff = 0.0;

  void add(CLI::App* app) {
    app->add_option("--topology", topology, "linear, cyclic or pairs (overrides the input file)")
        ->check(CLI::IsMember({"linear", "cyclic", "pairs"}));
    app->add_option("--neighbor-order", neighbor_order, "nearest-neighbour rank retained")
        ->check(CLI::PositiveNumber);
    app->add_option("--cutoff", cutoff, "center-of-mass distance cutoff (bohr)")
        ->check(CLI::PositiveNumber);
  }
};

struct System {
  std::vector<MonomerData> monomers;
  Connectivity connectivity;
  std::vector<SitePair> pairs;
  ExcitonHamiltonian h;
  DipoleOperator dipole;
};

System load_system(const std::string& path, const TopologyFlags& flags) {
  auto input = system_from_json(read_json_file(path));
  System s;
  s.monomers = std::move(input.monomers);
  const int n = static_cast<int>(s.monomers.size());
  Connectivity c = input.connectivity ? *input.connectivity : Connectivity::linear(n);
  if (!flags.topology.empty()) {
    if (flags.topology == "linear") c.topology = Topology::Linear;
    else if (flags.topology == "cyclic") c.topology = Topology::Cyclic;
    else c.topology = Topology::Pairs;
    require(c.topology != Topology::Pairs || !c.pairs.empty(), ErrorKind::InvalidArgument,
            "--topology pairs needs a pair list in the input file");
  }
  if (flags.neighbor_order > 0) c.neighbor_order = flags.neighbor_order;
  if (flags.cutoff > 0.0) c.cutoff = flags.cutoff;
  c.n_sites = n;
  s.connectivity = c;
  s.pairs = retained_pairs(c, s.monomers);
  s.h = build_hamiltonian(s.monomers, c);
  s.dipole = build_dipole_operator(s.monomers);
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void attach_amplitudes(MethodResult& r, const std::vector<StateVector>& states) {
  if (r.n_sites > kAmplitudeCap) return;
  for (const auto& s : states) {
    auto a = s.amplitudes();
    r.amplitudes.emplace_back(a.begin(), a.end());
  }
}

void write_json(const std::string& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

void print_summary(const MethodResult& r) {
  std::printf("%s: %zu states, N=%d\n", r.method.c_str(), r.transitions.energies.size(), r.n_sites);
  for (std::size_t i = 0; i < r.transitions.energies.size(); ++i)
    std::printf("  %2zu  E=%.10f Eh  dE=%.6f eV  f=%.6f\n", i, r.transitions.energies[i],
                r.transitions.excitation_ev[i], r.transitions.oscillator_strengths[i]);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multistate contracted VQE for exciton models on a statevector simulator"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "worker threads (default from MCVQE_THREADS)")
      ->envname("MCVQE_THREADS")
      ->check(CLI::PositiveNumber);

  // synth
  auto* synth = app.add_subcommand("synth", "write a synthetic ring or stack");
  std::string kind = "ring", synth_out;
  int synth_n = 0;
  std::uint64_t synth_seed = 1;
  std::optional<double> gap, sigma, distance, dip, diff_dip, ground_dip;
  synth->add_option("--kind", kind, "ring or stack")->check(CLI::IsMember({"ring", "stack"}));
  synth->add_option("--n", synth_n, "number of monomers")->required()->check(CLI::Range(2, kMaxQubits));
  synth->add_option("--seed", synth_seed, "disorder seed");
  synth->add_option("--gap", gap, "mean excitation gap (hartree)");
  synth->add_option("--sigma", sigma, "gap disorder (hartree)");
  synth->add_option("--distance", distance, "nearest-neighbour distance (bohr)");
  synth->add_option("--dipole", dip, "transition dipole magnitude (a.u.)");
  synth->add_option("--diff-dipole", diff_dip, "excited minus ground dipole magnitude (a.u.)");
  synth->add_option("--ground-dipole", ground_dip, "ground-state dipole magnitude (a.u.)");
  synth->add_option("--out", synth_out, "output monomer JSON")->required();

  // build
  auto* build = app.add_subcommand("build", "validate input and summarize the Hamiltonian");
  std::string build_in;
  TopologyFlags build_topo;
  build->add_option("--in", build_in, "monomer JSON")->required();
  build_topo.add(build);

  // cis
  auto* cis = app.add_subcommand("cis", "classical CIS with circuit-prepared states");
  std::string cis_in, cis_out;
  int cis_states = 0;
  TopologyFlags cis_topo;
  cis->add_option("--in", cis_in, "monomer JSON")->required();
  cis->add_option("--out", cis_out, "results JSON")->required();
  cis->add_option("--states", cis_states, "number of states (default N+1)")->check(CLI::PositiveNumber);
  cis_topo.add(cis);

  // mcvqe
  auto* mc = app.add_subcommand("mcvqe", "optimize the entangler and diagonalize the subspace");
  std::string mc_in, mc_out, mc_opt = "lbfgs", mc_param = "pauli";
  McVqeConfig cfg;
  TopologyFlags mc_topo;
  bool mc_verbose = false;
  mc->add_option("--in", mc_in, "monomer JSON")->required();
  mc->add_option("--out", mc_out, "results JSON")->required();
  mc->add_option("--states", cfg.n_states, "number of states (default N+1)")->check(CLI::PositiveNumber);
  mc->add_option("--layers", cfg.n_layers, "entangler layers")->check(CLI::PositiveNumber);
  mc->add_option("--fd-step", cfg.fd_step, "finite-difference step (rad)")->check(CLI::PositiveNumber);
  mc->add_option("--gtol", cfg.gtol, "tolerance on max |dE/dtheta|")->check(CLI::PositiveNumber);
  mc->add_option("--max-iter", cfg.max_iter, "optimizer iteration cap")->check(CLI::NonNegativeNumber);
  mc->add_option("--optimizer", mc_opt, "lbfgs or powell")->check(CLI::IsMember({"lbfgs", "powell"}));
  mc->add_option("--parametrization", mc_param, "pauli, antisym or gate_native")
      ->check(CLI::IsMember({"pauli", "antisym", "gate_native"}));
  mc_topo.add(mc);
  mc->add_flag("-v,--verbose", mc_verbose, "print each accepted iterate to stderr");

  // fci
  auto* fci = app.add_subcommand("fci", "exact lowest eigenpairs");
  std::string fci_in, fci_out;
  int fci_states = 0;
  FciOptions fopts;
  TopologyFlags fci_topo;
  fci->add_option("--in", fci_in, "monomer JSON")->required();
  fci->add_option("--out", fci_out, "results JSON")->required();
  fci->add_option("--states", fci_states, "number of states (default N+1)")->check(CLI::PositiveNumber);
  fci->add_option("--seed", fopts.seed, "Lanczos start-vector seed");
  fci->add_option("--tol", fopts.tol, "residual tolerance")->check(CLI::PositiveNumber);
  fci->add_option("--dense-threshold", fopts.dense_threshold, "largest N solved densely");
  fci->add_option("--max-restarts", fopts.max_restarts, "Lanczos restart cap")->check(CLI::PositiveNumber);
  fci_topo.add(fci);

  // spectrum
  auto* spec = app.add_subcommand("spectrum", "Lorentzian-broadened absorption spectrum");
  std::string spec_in, spec_out;
  double delta = 0.05;
  std::optional<double> emin, emax;
  int points = 2000;
  spec->add_option("--in", spec_in, "results JSON")->required();
  spec->add_option("--out", spec_out, "output CSV")->required();
  spec->add_option("--delta", delta, "half width at half maximum (eV)")->check(CLI::PositiveNumber);
  spec->add_option("--emin", emin, "grid start (eV)");
  spec->add_option("--emax", emax, "grid end (eV)");
  spec->add_option("--points", points, "grid points")->check(CLI::Range(2, 10000000));

  // compare
  auto* cmp = app.add_subcommand("compare", "errors of each result against FCI");
  std::vector<std::string> cmp_in;
  std::string cmp_out;
  cmp->add_option("--in", cmp_in, "results JSON files")->required()->expected(2, -1);
  cmp->add_option("--out", cmp_out, "report JSON (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();

    if (*synth) {
      SynthSpec s = SynthSpec::defaults(synth_kind_from_string(kind), synth_n);
      s.seed = synth_seed;
      if (gap) s.gap = *gap;
      if (sigma) s.gap_sigma = *sigma;
      if (distance) s.distance = *distance;
      if (dip) s.transition_dipole = *dip;
      if (diff_dip) s.difference_dipole = *diff_dip;
      if (ground_dip) s.ground_dipole = *ground_dip;
      const auto sys = generate(s);
      write_json(synth_out, system_to_json({sys.monomers, sys.connectivity}));
      return kOk;
    }

    if (*build) {
      const System s = load_system(build_in, build_topo);
      const auto terms = s.h.terms();
      double zmin = 0, zmax = 0, xmin = 0, xmax = 0, pmax = 0;
      for (int a = 0; a < s.h.n_sites; ++a) {
        zmin = a == 0 ? s.h.z[a] : std::min(zmin, s.h.z[a]);
        zmax = a == 0 ? s.h.z[a] : std::max(zmax, s.h.z[a]);
        xmin = a == 0 ? s.h.x[a] : std::min(xmin, s.h.x[a]);
        xmax = a == 0 ? s.h.x[a] : std::max(xmax, s.h.x[a]);
      }
      for (const auto& p : s.h.pairs)
        pmax = std::max({pmax, std::abs(p.xx), std::abs(p.xz), std::abs(p.zx), std::abs(p.zz)});
      std::printf("sites          %d\n", s.h.n_sites);
      std::printf("pairs          %zu\n", s.h.pairs.size());
      std::printf("pauli terms    %zu\n", terms.size());
      std::printf("scalar         %.12g\n", s.h.e_scalar);
      std::printf("Z range        [%.12g, %.12g]\n", zmin, zmax);
      std::printf("X range        [%.12g, %.12g]\n", xmin, xmax);
      std::printf("max |pair|     %.12g\n", pmax);
      return kOk;
    }

    if (*cis) {
      const System s = load_system(cis_in, cis_topo);
      auto run = run_cis(s.h, s.dipole, cis_states);
      MethodResult r;
      r.method = "cis";
      r.n_sites = s.h.n_sites;
      r.transitions = run.transitions;
      attach_amplitudes(r, run.states);
      r.seconds = seconds_since(t0);
      write_json(cis_out, result_to_json(r));
      print_summary(r);
      return kOk;
    }

    if (*mc) {
      const System s = load_system(mc_in, mc_topo);
      cfg.optimizer = optimizer_from_string(mc_opt);
      cfg.parametrization = parametrization_from_string(mc_param);
      cfg.threads = threads;
      if (mc_verbose)
        cfg.on_iterate = [t0](const numerics::TraceEntry& e) {
          std::fprintf(stderr, "iter %4d  E=%.12f  |g|=%.3e  %.1fs\n", e.iteration, e.value,
                       e.gradient_max, seconds_since(t0));
        };
      const McVqeProblem problem(s.h, s.connectivity, s.pairs, cfg);
      auto run = run_mcvqe(problem, s.dipole);
      MethodResult r;
      r.method = "mcvqe";
      r.n_sites = s.h.n_sites;
      r.transitions = run.transitions;
      r.parametrization = to_string(cfg.parametrization);
      r.n_layers = cfg.n_layers;
      r.entangler_pairs = problem.layout().pairs();
      r.parameters = run.params.values;
      r.optimizer = to_string(cfg.optimizer);
      r.optimizer_status = run.optimization.status;
      r.converged = run.optimization.converged;
      r.iterations = run.optimization.iterations;
      r.evaluations = run.optimization.evaluations;
      r.trace = run.optimization.trace;
      r.subspace_hamiltonian = run.subspace.h_sub;
      attach_amplitudes(r, run.eigenstates);
      r.seconds = seconds_since(t0);
      write_json(mc_out, result_to_json(r));
      print_summary(r);
      std::printf("optimizer: %s after %d iterations, %zu parameters\n", r.optimizer_status.c_str(),
                  r.iterations, r.parameters.size());
      return kOk;
    }

    if (*fci) {
      const System s = load_system(fci_in, fci_topo);
      const int k = fci_states > 0 ? fci_states : s.h.n_sites + 1;
      auto res = fci_solve(s.h, k, fopts);
      MethodResult r;
      r.method = "fci";
      r.n_sites = s.h.n_sites;
      r.transitions = transitions_from_states(res.energies, res.vectors, s.dipole);
      r.residuals = res.residuals;
      attach_amplitudes(r, res.vectors);
      r.seconds = seconds_since(t0);
      write_json(fci_out, result_to_json(r));
      print_summary(r);
      return kOk;
    }

    if (*spec) {
      const MethodResult r = result_from_json(read_json_file(spec_in));
      std::vector<SpectralLine> lines;
      for (std::size_t i = 1; i < r.transitions.excitation_ev.size(); ++i)
        lines.push_back({r.transitions.excitation_ev[i], r.transitions.oscillator_strengths[i]});
      require(!lines.empty(), ErrorKind::InvalidArgument, "spectrum: result holds no transitions");
      double lo = lines.front().energy_ev, hi = lo;
      for (const auto& l : lines) {
        lo = std::min(lo, l.energy_ev);
        hi = std::max(hi, l.energy_ev);
      }
      const double a = emin ? *emin : lo - 20.0 * delta;
      const double b = emax ? *emax : hi + 20.0 * delta;
      const auto sp = make_spectrum(r.method, std::move(lines), delta, a, b, points);
      write_text_file(spec_out, spectrum_csv(sp));
      return kOk;
    }

    if (*cmp) {
      std::vector<MethodResult> results;
      for (const auto& p : cmp_in) results.push_back(result_from_json(read_json_file(p)));
      const Json report = compare_results(results);
      if (cmp_out.empty()) std::cout << report.dump(2) << "\n";
      else write_json(cmp_out, report);
      for (const auto& e : report["errors"])
        std::fprintf(stderr, "%s vs %s: max |dE| = %.3e eV, max |df| = %.3e\n",
                     e["method"].get<std::string>().c_str(), e["reference"].get<std::string>().c_str(),
                     e["max_excitation_energy_error_ev"].get<double>(),
                     e["max_oscillator_strength_abs_error"].get<double>());
      return kOk;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "mcvqe: %s\n", e.what());
    return exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "mcvqe: schema error: %s\n", e.what());
    return kSchema;
  } catch (const std::bad_alloc&) {
    std::fprintf(stderr, "mcvqe: out of memory\n");
    return kCap;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "mcvqe: %s\n", e.what());
    return kFailure;
  }
  return kUsage;
}
