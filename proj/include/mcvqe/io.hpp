#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcvqe/driver.hpp"
#include "mcvqe/model.hpp"
#include "mcvqe/numerics.hpp"

namespace mcvqe {

using Json = nlohmann::json;

/// Results carry amplitudes only up to this many sites.
inline constexpr int kAmplitudeCap = 12;

struct SystemInput {
  std::vector<MonomerData> monomers;
  std::optional<Connectivity> connectivity;
};

Json monomers_to_json(const std::vector<MonomerData>& monomers);
std::vector<MonomerData> monomers_from_json(const Json& j);
Json connectivity_to_json(const Connectivity& conn);
Connectivity connectivity_from_json(const Json& j, int n_sites);

/// Accepts a bare monomer array or {"monomers": [...], "connectivity": {...}}.
SystemInput system_from_json(const Json& j);
Json system_to_json(const SystemInput& s);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

struct MethodResult {
  std::string method;  ///< cis, mcvqe, fci
  int n_sites = 0;
  TransitionSet transitions;
  // mcvqe
  std::string parametrization;
  int n_layers = 0;
  std::vector<std::pair<int, int>> entangler_pairs;
  std::vector<double> parameters;
  std::string optimizer;
  std::string optimizer_status;
  bool converged = false;
  int iterations = 0;
  int evaluations = 0;
  std::vector<numerics::TraceEntry> trace;
  std::optional<Matrix> subspace_hamiltonian;
  // fci
  std::vector<double> residuals;
  std::vector<std::vector<double>> amplitudes;  ///< per state, N <= kAmplitudeCap
  double seconds = 0.0;
};

Json result_to_json(const MethodResult& r);
MethodResult result_from_json(const Json& j);

/// Per-method errors against a reference (FCI when present, else the first).
Json compare_results(const std::vector<MethodResult>& results);

}  // namespace mcvqe
