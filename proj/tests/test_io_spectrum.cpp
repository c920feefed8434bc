#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "mcvqe/error.hpp"
#include "mcvqe/io.hpp"
#include "mcvqe/spectrum.hpp"
#include "mcvqe/synth.hpp"

using namespace mcvqe;

namespace {

MethodResult fake(const std::string& method, std::vector<double> energies, std::vector<double> osc) {
  MethodResult r;
  r.method = method;
  r.n_sites = 2;
  auto& t = r.transitions;
  t.energies = energies;
  for (double e : energies) t.excitation_ev.push_back((e - energies[0]) * 27.211386245988);
  t.oscillator_strengths = std::move(osc);
  t.transition_dipoles.assign(energies.size(), Vec3{});
  t.degenerate.assign(energies.size(), false);
  return r;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("system JSON round trip") {
  auto sys = generate(SynthSpec::defaults(SynthKind::Stack, 4));
  sys.monomers[2].x_intra = 1e-3;
  SystemInput in{sys.monomers, sys.connectivity};
  const Json j = system_to_json(in);
  const SystemInput back = system_from_json(Json::parse(j.dump()));
  CHECK(back.monomers == sys.monomers);
  REQUIRE(back.connectivity);
  CHECK(back.connectivity->topology == Topology::Linear);

  const SystemInput bare = system_from_json(monomers_to_json(sys.monomers));
  CHECK(!bare.connectivity);
  CHECK(bare.monomers == sys.monomers);

  Connectivity c = Connectivity::explicit_pairs(4, {{3, 0}, {2, 1}});
  c.cutoff = 30.0;
  const Connectivity cb = connectivity_from_json(connectivity_to_json(c), 4);
  CHECK(cb.pairs == c.pairs);
  CHECK(cb.cutoff == c.cutoff);
  CHECK(cb.topology == Topology::Pairs);
}

TEST_CASE("schema violations") {
  Json j = monomers_to_json(generate(SynthSpec::defaults(SynthKind::Ring, 3)).monomers);
  Json missing = j;
  missing[1].erase("mu_01");
  CHECK(kind_of([&] { monomers_from_json(missing); }) == ErrorKind::Schema);
  Json wrong = j;
  wrong[0]["com"] = Json::array({1, 2});
  CHECK(kind_of([&] { monomers_from_json(wrong); }) == ErrorKind::Schema);
  CHECK(kind_of([&] { monomers_from_json(Json::array()); }) == ErrorKind::Schema);
  CHECK(kind_of([&] { system_from_json(Json(3)); }) == ErrorKind::Schema);
  CHECK(kind_of([&] { connectivity_from_json({{"topology", "star"}}, 3); }) == ErrorKind::Schema);
  CHECK(kind_of([&] { read_json_file("/nonexistent/none.json"); }) == ErrorKind::Io);

  const auto dir = std::filesystem::temp_directory_path();
  const auto bad = (dir / "mcvqe_bad.json").string();
  write_text_file(bad, "{not json");
  CHECK(kind_of([&] { read_json_file(bad); }) == ErrorKind::Schema);
  std::filesystem::remove(bad);
}

TEST_CASE("result JSON round trip") {
  MethodResult r = fake("mcvqe", {-1.0, -0.9, -0.85}, {0.0, 0.2, 0.01});
  r.parametrization = "pauli";
  r.n_layers = 1;
  r.entangler_pairs = {{0, 1}};
  r.parameters = {0.1, -0.2, 0.3, 0, 0, 0.05};
  r.optimizer = "lbfgs";
  r.optimizer_status = "converged";
  r.converged = true;
  r.iterations = 3;
  r.evaluations = 9;
  r.trace = {{0, -0.9, 0.1}, {1, -0.91, 0.01}};
  Matrix h(3, 3);
  h(0, 1) = h(1, 0) = 0.01;
  r.subspace_hamiltonian = h;
  r.amplitudes = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}};
  r.transitions.populations = {{0, 0}, {1, 0}, {0, 1}};
  const Json j = result_to_json(r);
  CHECK(j["entangler"]["n_parameters"] == 6);
  CHECK(j["energies_ev"][0].get<double>() == doctest::Approx(-27.211386245988));
  const MethodResult b = result_from_json(Json::parse(j.dump()));
  CHECK(b.transitions.energies == r.transitions.energies);
  CHECK(b.parameters == r.parameters);
  CHECK(b.entangler_pairs == r.entangler_pairs);
  CHECK(b.trace.size() == 2);
  CHECK(b.trace[1].value == -0.91);
  CHECK(*b.subspace_hamiltonian == h);
  CHECK(b.amplitudes == r.amplitudes);
  CHECK(b.transitions.populations == r.transitions.populations);

  Json broken = j;
  broken["oscillator_strengths"] = Json::array({0.0});
  CHECK(kind_of([&] { result_from_json(broken); }) == ErrorKind::Schema);
}

TEST_CASE("compare_results") {
  const MethodResult fci = fake("fci", {-1.0, -0.9, -0.8}, {0.0, 0.5, 0.0});
  const MethodResult mc = fake("mcvqe", {-1.0, -0.899, -0.8}, {0.0, 0.51, 1e-3});
  const Json rep = compare_results({mc, fci});
  CHECK(rep["reference"] == "fci");
  REQUIRE(rep["errors"].size() == 1);
  const Json& e = rep["errors"][0];
  CHECK(e["method"] == "mcvqe");
  CHECK(e["excitation_energy_error_ev"][1].get<double>() == doctest::Approx(0.001 * 27.211386245988));
  CHECK(e["max_oscillator_strength_abs_error"].get<double>() == doctest::Approx(0.01));
  CHECK(e["oscillator_strength_rel_error"][1].get<double>() == doctest::Approx(0.02));
  CHECK(e["oscillator_strength_rel_error"][2].is_null());
  CHECK(!e.contains("fidelities"));

  MethodResult a = fci, b = mc;
  a.amplitudes = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}};
  const double s = 1 / std::sqrt(2.0);
  b.amplitudes = {{1, 0, 0, 0}, {0, s, s, 0}, {0, 0, 1, 0}};
  const Json rf = compare_results({b, a});
  CHECK(rf["errors"][0]["fidelities"][1].get<double>() == doctest::Approx(s));
  CHECK(rf["errors"][0]["min_fidelity"].get<double>() == doctest::Approx(s));

  const Json first = compare_results({mc, fake("cis", {-1.0, -0.85, -0.8}, {0, 0.4, 0})});
  CHECK(first["reference"] == "mcvqe");
  CHECK_THROWS_AS(compare_results({fci}), Error);
}

TEST_CASE("Lorentzian broadening") {
  const std::vector<SpectralLine> one{{2.0, 1.0}};
  const double d = 0.05;
  const auto peak = broaden(one, d, {2.0, 2.0 - d, 2.0 + d});
  CHECK(peak[0] == doctest::Approx(1.0 / (std::numbers::pi * d)));
  CHECK(peak[0] == doctest::Approx(6.3662).epsilon(1e-4));
  CHECK(peak[1] == doctest::Approx(peak[0] / 2));
  CHECK(peak[2] == doctest::Approx(peak[0] / 2));

  const std::vector<SpectralLine> lines{{1.6, 0.7}, {1.7, 0.2}, {1.75, 0.05}};
  const auto grid = linear_grid(1.6 - 40 * d, 1.75 + 40 * d, 20001);
  const auto I = broaden(lines, d, grid);
  double integral = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) integral += 0.5 * (I[i] + I[i - 1]) * (grid[i] - grid[i - 1]);
  CHECK(std::abs(integral - 0.95) < 0.02 * 0.95);
  for (double x : I) CHECK(x >= 0.0);
}

TEST_CASE("grid and CSV") {
  const auto g = linear_grid(1.0, 3.0, 2000);
  CHECK(g.size() == 2000);
  CHECK(g.front() == 1.0);
  CHECK(g.back() == 3.0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  CHECK_THROWS_AS(linear_grid(2.0, 1.0, 10), Error);

  const auto s = make_spectrum("fci", {{2.0, 0.5}}, 0.05, 1.0, 3.0, 2000);
  const std::string csv = spectrum_csv(s);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "energy_ev,intensity");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 2000);
  CHECK_THROWS_AS(make_spectrum("fci", {}, 0.0, 1.0, 3.0, 10), Error);
}
