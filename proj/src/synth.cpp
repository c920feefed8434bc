#include "mcvqe/synth.hpp"

#include <cmath>
#include <numbers>

#include "mcvqe/error.hpp"
#include "mcvqe/rng.hpp"

namespace mcvqe {

std::string to_string(SynthKind k) { return k == SynthKind::Ring ? "ring" : "stack"; }

SynthKind synth_kind_from_string(const std::string& s) {
  if (s == "ring") return SynthKind::Ring;
  if (s == "stack") return SynthKind::Stack;
  fail(ErrorKind::InvalidArgument, "unknown synthetic system kind '" + s + "'");
}

SynthSpec SynthSpec::defaults(SynthKind kind, int n_sites) {
  SynthSpec s;
  s.kind = kind;
  s.n_sites = n_sites;
  if (kind == SynthKind::Ring) {
    s.gap = 0.06;
    s.transition_dipole = 2.5;
    s.distance = 21.7;  // 2 μ² / d³ ≈ 0.02 × gap
    s.difference_dipole = 0.5;
    s.ground_dipole = 0.3;
  } else {
    s.gap = 0.06;
    s.transition_dipole = 2.5;
    s.distance = 9.0;
    s.difference_dipole = 1.5;
    s.ground_dipole = 0.5;
  }
  return s;
}

void SynthSpec::validate() const {
  require(n_sites >= 2, ErrorKind::InvalidArgument, "synth: need at least 2 sites");
  require(n_sites <= kMaxQubits, ErrorKind::CapExceeded, "synth: too many sites");
  require(distance > 0.0, ErrorKind::InvalidArgument, "synth: distance must be positive");
  require(gap > 0.0 && gap_sigma >= 0.0, ErrorKind::InvalidArgument,
          "synth: gap must be positive and disorder non-negative");
  require(transition_dipole >= 0.0 && difference_dipole >= 0.0 && ground_dipole >= 0.0,
          ErrorKind::InvalidArgument, "synth: dipole magnitudes must be non-negative");
}

SynthSystem generate(const SynthSpec& in) {
  SynthSpec spec = in;
  const SynthSpec def = SynthSpec::defaults(in.kind, in.n_sites);
  if (spec.distance == 0.0) spec.distance = def.distance;
  if (spec.transition_dipole == 0.0) spec.transition_dipole = def.transition_dipole;
  spec.validate();

  Rng rng(spec.seed);
  const int n = spec.n_sites;
  SynthSystem sys;
  const bool ring = spec.kind == SynthKind::Ring;
  const double radius = ring ? spec.distance / (2.0 * std::sin(std::numbers::pi / n)) : 0.0;
  for (int a = 0; a < n; ++a) {
    MonomerData m;
    m.index = a;
    m.e_s0 = 0.0;
    double gap = spec.gap + spec.gap_sigma * rng.normal();
    if (!(gap > 0.0)) gap = 0.1 * spec.gap;  // keep e_s1 above e_s0
    m.e_s1 = gap;
    Vec3 axis, ground;
    if (ring) {
      const double phi = 2.0 * std::numbers::pi * a / n;
      m.com = {radius * std::cos(phi), radius * std::sin(phi), 0.0};
      axis = {-std::sin(phi), std::cos(phi), 0.0};
      ground = {0.0, 0.0, 1.0};
    } else {
      m.com = {0.0, 0.0, spec.distance * a};
      axis = {1.0, 0.0, 0.0};
      ground = {0.0, 1.0, 0.0};
    }
    m.mu_00 = spec.ground_dipole * ground;
    m.mu_11 = m.mu_00 + spec.difference_dipole * axis;
    m.mu_01 = spec.transition_dipole * axis;
    sys.monomers.push_back(m);
  }
  sys.connectivity = ring ? Connectivity::cyclic(n) : Connectivity::linear(n);
  return sys;
}

}  // namespace mcvqe
