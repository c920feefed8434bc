#include "mcvqe/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mcvqe/error.hpp"
#include "mcvqe/units.hpp"

namespace mcvqe {

namespace {

[[noreturn]] void schema(const std::string& what) { fail(ErrorKind::Schema, what); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) schema(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(where + ": missing key '" + key + "'");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) schema(where + ": expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) schema(where + ": expected an integer");
  return j.get<int>();
}

Vec3 vec3(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) schema(where + ": expected 3 numbers");
  return {number(j[0], where), number(j[1], where), number(j[2], where)};
}

std::vector<double> numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) schema(where + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(number(x, where));
  return out;
}

std::vector<std::vector<double>> rows(const Json& j, const std::string& where) {
  if (!j.is_array()) schema(where + ": expected an array of arrays");
  std::vector<std::vector<double>> out;
  for (const auto& r : j) out.push_back(numbers(r, where));
  return out;
}

Json vec3_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

std::string topology_name(Topology t) {
  switch (t) {
    case Topology::Linear: return "linear";
    case Topology::Cyclic: return "cyclic";
    case Topology::Pairs: return "pairs";
  }
  return "?";
}

}  // namespace

Json monomers_to_json(const std::vector<MonomerData>& monomers) {
  Json arr = Json::array();
  for (const auto& m : monomers) {
    arr.push_back({{"index", m.index},
                   {"e_s0", m.e_s0},
                   {"e_s1", m.e_s1},
                   {"com", vec3_json(m.com)},
                   {"mu_00", vec3_json(m.mu_00)},
                   {"mu_11", vec3_json(m.mu_11)},
                   {"mu_01", vec3_json(m.mu_01)},
                   {"x_intra", m.x_intra}});
  }
  return arr;
}

std::vector<MonomerData> monomers_from_json(const Json& j) {
  if (!j.is_array()) schema("monomers: expected an array");
  if (j.empty()) schema("monomers: list is empty");
  std::vector<MonomerData> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "monomers[" + std::to_string(i) + "]";
    const Json& e = j[i];
    MonomerData m;
    m.index = integer(field(e, "index", where), where + ".index");
    m.e_s0 = number(field(e, "e_s0", where), where + ".e_s0");
    m.e_s1 = number(field(e, "e_s1", where), where + ".e_s1");
    m.com = vec3(field(e, "com", where), where + ".com");
    m.mu_00 = vec3(field(e, "mu_00", where), where + ".mu_00");
    m.mu_11 = vec3(field(e, "mu_11", where), where + ".mu_11");
    m.mu_01 = vec3(field(e, "mu_01", where), where + ".mu_01");
    if (auto it = e.find("x_intra"); it != e.end()) m.x_intra = number(*it, where + ".x_intra");
    out.push_back(m);
  }
  return out;
}

Json connectivity_to_json(const Connectivity& conn) {
  Json j = {{"topology", topology_name(conn.topology)}, {"neighbor_order", conn.neighbor_order}};
  if (conn.topology == Topology::Pairs) {
    Json p = Json::array();
    for (const auto& sp : conn.pairs) p.push_back(Json::array({sp.a, sp.b}));
    j["pairs"] = p;
  }
  if (conn.cutoff) j["cutoff"] = *conn.cutoff;
  return j;
}

Connectivity connectivity_from_json(const Json& j, int n_sites) {
  const std::string where = "connectivity";
  const Json& t = field(j, "topology", where);
  if (!t.is_string()) schema(where + ".topology: expected a string");
  const std::string name = t.get<std::string>();
  Connectivity c;
  c.n_sites = n_sites;
  if (name == "linear") c.topology = Topology::Linear;
  else if (name == "cyclic") c.topology = Topology::Cyclic;
  else if (name == "pairs") c.topology = Topology::Pairs;
  else schema(where + ".topology: unknown value '" + name + "'");
  if (auto it = j.find("neighbor_order"); it != j.end())
    c.neighbor_order = integer(*it, where + ".neighbor_order");
  if (auto it = j.find("cutoff"); it != j.end() && !it->is_null())
    c.cutoff = number(*it, where + ".cutoff");
  if (c.topology == Topology::Pairs) {
    const Json& p = field(j, "pairs", where);
    if (!p.is_array()) schema(where + ".pairs: expected an array");
    for (const auto& e : p) {
      if (!e.is_array() || e.size() != 2) schema(where + ".pairs: expected [a, b] entries");
      c.pairs.push_back({integer(e[0], where + ".pairs"), integer(e[1], where + ".pairs")});
    }
  }
  return c;
}

SystemInput system_from_json(const Json& j) {
  SystemInput s;
  if (j.is_array()) {
    s.monomers = monomers_from_json(j);
    return s;
  }
  if (!j.is_object()) schema("input: expected a monomer array or an object");
  s.monomers = monomers_from_json(field(j, "monomers", "input"));
  if (auto it = j.find("connectivity"); it != j.end() && !it->is_null())
    s.connectivity = connectivity_from_json(*it, static_cast<int>(s.monomers.size()));
  return s;
}

Json system_to_json(const SystemInput& s) {
  if (!s.connectivity) return monomers_to_json(s.monomers);
  return {{"monomers", monomers_to_json(s.monomers)},
          {"connectivity", connectivity_to_json(*s.connectivity)}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    schema("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path + "'");
  out << text;
  out.flush();
  if (!out) fail(ErrorKind::Io, "error while writing '" + path + "'");
}

Json result_to_json(const MethodResult& r) {
  const auto& t = r.transitions;
  Json j;
  j["method"] = r.method;
  j["n_sites"] = r.n_sites;
  j["n_states"] = t.energies.size();
  j["energies_hartree"] = t.energies;
  Json ev = Json::array();
  for (double e : t.energies) ev.push_back(units::hartree_to_ev(e));
  j["energies_ev"] = ev;
  j["excitation_energies_ev"] = t.excitation_ev;
  j["oscillator_strengths"] = t.oscillator_strengths;
  Json dip = Json::array();
  for (const auto& d : t.transition_dipoles) dip.push_back(vec3_json(d));
  j["transition_dipoles"] = dip;
  j["populations"] = t.populations;
  j["degenerate"] = t.degenerate;
  if (!r.parameters.empty() || r.method == "mcvqe") {
    Json pairs = Json::array();
    for (auto [p, q] : r.entangler_pairs) pairs.push_back(Json::array({p, q}));
    j["entangler"] = {{"parametrization", r.parametrization},
                      {"n_layers", r.n_layers},
                      {"pairs", pairs},
                      {"n_parameters", r.parameters.size()},
                      {"parameters", r.parameters}};
  }
  if (!r.optimizer.empty()) {
    Json trace = Json::array();
    for (const auto& e : r.trace)
      trace.push_back({{"iteration", e.iteration}, {"value", e.value}, {"gradient_max", e.gradient_max}});
    j["optimizer"] = {{"name", r.optimizer},
                      {"status", r.optimizer_status},
                      {"converged", r.converged},
                      {"iterations", r.iterations},
                      {"evaluations", r.evaluations},
                      {"trace", trace}};
  }
  if (r.subspace_hamiltonian) {
    const Matrix& m = *r.subspace_hamiltonian;
    Json h = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      auto row = m.row(i);
      h.push_back(std::vector<double>(row.begin(), row.end()));
    }
    j["subspace_hamiltonian"] = h;
  }
  if (!r.residuals.empty()) j["residuals"] = r.residuals;
  if (!r.amplitudes.empty()) j["amplitudes"] = r.amplitudes;
  j["timings"] = {{"total_seconds", r.seconds}};
  return j;
}

MethodResult result_from_json(const Json& j) {
  const std::string w = "result";
  MethodResult r;
  const Json& m = field(j, "method", w);
  if (!m.is_string()) schema("result.method: expected a string");
  r.method = m.get<std::string>();
  r.n_sites = integer(field(j, "n_sites", w), "result.n_sites");
  auto& t = r.transitions;
  t.energies = numbers(field(j, "energies_hartree", w), "result.energies_hartree");
  t.excitation_ev = numbers(field(j, "excitation_energies_ev", w), "result.excitation_energies_ev");
  t.oscillator_strengths = numbers(field(j, "oscillator_strengths", w), "result.oscillator_strengths");
  const std::size_t k = t.energies.size();
  if (t.excitation_ev.size() != k || t.oscillator_strengths.size() != k)
    schema("result: per-state arrays have inconsistent lengths");
  if (auto it = j.find("transition_dipoles"); it != j.end()) {
    if (!it->is_array()) schema("result.transition_dipoles: expected an array");
    for (const auto& d : *it) t.transition_dipoles.push_back(vec3(d, "result.transition_dipoles"));
  }
  if (auto it = j.find("populations"); it != j.end()) t.populations = rows(*it, "result.populations");
  if (auto it = j.find("degenerate"); it != j.end()) {
    if (!it->is_array()) schema("result.degenerate: expected an array");
    for (const auto& b : *it) {
      if (!b.is_boolean()) schema("result.degenerate: expected booleans");
      t.degenerate.push_back(b.get<bool>());
    }
  }
  if (auto it = j.find("entangler"); it != j.end()) {
    const std::string we = "result.entangler";
    const Json& p = field(*it, "parametrization", we);
    if (!p.is_string()) schema(we + ".parametrization: expected a string");
    r.parametrization = p.get<std::string>();
    r.n_layers = integer(field(*it, "n_layers", we), we + ".n_layers");
    r.parameters = numbers(field(*it, "parameters", we), we + ".parameters");
    const Json& pairs = field(*it, "pairs", we);
    if (!pairs.is_array()) schema(we + ".pairs: expected an array");
    for (const auto& e : pairs) {
      if (!e.is_array() || e.size() != 2) schema(we + ".pairs: expected [p, q] entries");
      r.entangler_pairs.emplace_back(integer(e[0], we), integer(e[1], we));
    }
  }
  if (auto it = j.find("optimizer"); it != j.end()) {
    const std::string wo = "result.optimizer";
    r.optimizer = field(*it, "name", wo).get<std::string>();
    r.optimizer_status = field(*it, "status", wo).get<std::string>();
    r.converged = field(*it, "converged", wo).get<bool>();
    r.iterations = integer(field(*it, "iterations", wo), wo);
    r.evaluations = integer(field(*it, "evaluations", wo), wo);
    for (const auto& e : field(*it, "trace", wo))
      r.trace.push_back({integer(field(e, "iteration", wo), wo), number(field(e, "value", wo), wo),
                         number(field(e, "gradient_max", wo), wo)});
  }
  if (auto it = j.find("subspace_hamiltonian"); it != j.end()) {
    const auto h = rows(*it, "result.subspace_hamiltonian");
    Matrix m(h.size(), h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h[i].size() != h.size()) schema("result.subspace_hamiltonian: not square");
      for (std::size_t c = 0; c < h.size(); ++c) m(i, c) = h[i][c];
    }
    r.subspace_hamiltonian = std::move(m);
  }
  if (auto it = j.find("residuals"); it != j.end()) r.residuals = numbers(*it, "result.residuals");
  if (auto it = j.find("amplitudes"); it != j.end()) {
    r.amplitudes = rows(*it, "result.amplitudes");
    for (const auto& a : r.amplitudes)
      if (a.size() != (std::size_t{1} << r.n_sites)) schema("result.amplitudes: wrong length");
  }
  if (auto it = j.find("timings"); it != j.end())
    if (auto s = it->find("total_seconds"); s != it->end()) r.seconds = number(*s, "result.timings");
  return r;
}

namespace {

double overlap(const std::vector<double>& a, const std::vector<double>& b) { return dot(a, b); }

// |projection| of a onto the span of the reference states degenerate with state i.
double cluster_fidelity(const std::vector<double>& a, const MethodResult& ref, std::size_t i) {
  const auto& e = ref.transitions.energies;
  double s = 0.0;
  for (std::size_t j = 0; j < ref.amplitudes.size(); ++j)
    if (std::abs(e[j] - e[i]) < 1e-8) {
      const double o = overlap(a, ref.amplitudes[j]);
      s += o * o;
    }
  return std::min(1.0, std::sqrt(s));
}

Json nullable(double v, bool ok) { return ok ? Json(v) : Json(nullptr); }

}  // namespace

Json compare_results(const std::vector<MethodResult>& results) {
  require(results.size() >= 2, ErrorKind::InvalidArgument, "compare: need at least two results");
  std::size_t ref_index = 0;
  for (std::size_t i = 0; i < results.size(); ++i)
    if (results[i].method == "fci") {
      ref_index = i;
      break;
    }
  const MethodResult& ref = results[ref_index];
  for (const auto& r : results)
    require(r.n_sites == ref.n_sites, ErrorKind::InvalidArgument,
            "compare: results describe systems of different size");

  Json report;
  report["reference"] = ref.method;
  report["n_sites"] = ref.n_sites;
  Json methods = Json::array();
  for (const auto& r : results) {
    Json m = {{"method", r.method},
              {"n_states", r.transitions.energies.size()},
              {"excitation_energies_ev", r.transitions.excitation_ev},
              {"oscillator_strengths", r.transitions.oscillator_strengths},
              {"seconds", r.seconds}};
    if (!r.optimizer.empty()) {
      m["optimizer"] = {{"name", r.optimizer}, {"status", r.optimizer_status},
                        {"iterations", r.iterations}, {"converged", r.converged}};
      Json trace = Json::array();
      for (const auto& e : r.trace) trace.push_back(Json::array({e.iteration, e.value, e.gradient_max}));
      m["optimizer"]["trace"] = trace;
    }
    methods.push_back(m);
  }
  report["methods"] = methods;

  Json errors = Json::array();
  for (std::size_t idx = 0; idx < results.size(); ++idx) {
    if (idx == ref_index) continue;
    const MethodResult& r = results[idx];
    const std::size_t k = std::min(r.transitions.energies.size(), ref.transitions.energies.size());
    std::vector<double> de(k), dt(k), dosc(k);
    Json rel = Json::array();
    double max_de = 0.0, max_dt = 0.0, max_dosc = 0.0, max_rel = 0.0;
    bool any_rel = false;
    for (std::size_t i = 0; i < k; ++i) {
      de[i] = std::abs(r.transitions.excitation_ev[i] - ref.transitions.excitation_ev[i]);
      dt[i] = units::hartree_to_ev(std::abs(r.transitions.energies[i] - ref.transitions.energies[i]));
      const double o = r.transitions.oscillator_strengths[i];
      const double o_ref = ref.transitions.oscillator_strengths[i];
      dosc[i] = std::abs(o - o_ref);
      const bool ok = i > 0 && std::abs(o_ref) > 1e-10;
      const double rv = ok ? dosc[i] / std::abs(o_ref) : 0.0;
      rel.push_back(nullable(rv, ok));
      if (ok) {
        any_rel = true;
        max_rel = std::max(max_rel, rv);
      }
      max_de = std::max(max_de, de[i]);
      max_dt = std::max(max_dt, dt[i]);
      max_dosc = std::max(max_dosc, dosc[i]);
    }
    Json e = {{"method", r.method},
              {"reference", ref.method},
              {"n_states", k},
              {"excitation_energy_error_ev", de},
              {"max_excitation_energy_error_ev", max_de},
              {"total_energy_error_ev", dt},
              {"max_total_energy_error_ev", max_dt},
              {"oscillator_strength_abs_error", dosc},
              {"max_oscillator_strength_abs_error", max_dosc},
              {"oscillator_strength_rel_error", rel},
              {"max_oscillator_strength_rel_error", nullable(max_rel, any_rel)}};
    if (!r.amplitudes.empty() && !ref.amplitudes.empty()) {
      const std::size_t kf = std::min({k, r.amplitudes.size(), ref.amplitudes.size()});
      std::vector<double> fid(kf);
      double min_fid = 1.0;
      for (std::size_t i = 0; i < kf; ++i) {
        fid[i] = cluster_fidelity(r.amplitudes[i], ref, i);
        min_fid = std::min(min_fid, fid[i]);
      }
      e["fidelities"] = fid;
      e["min_fidelity"] = min_fid;
    }
    errors.push_back(e);
  }
  report["errors"] = errors;
  return report;
}

}  // namespace mcvqe
