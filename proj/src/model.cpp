#include "mcvqe/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "mcvqe/error.hpp"

namespace mcvqe {

namespace {

bool finite(const Vec3& v) {
  return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

SitePair ordered(int i, int j) { return i > j ? SitePair{i, j} : SitePair{j, i}; }

}  // namespace

std::vector<SitePair> Connectivity::topological_pairs() const {
  require(n_sites >= 1, ErrorKind::InvalidArgument, "connectivity: n_sites must be positive");
  std::set<SitePair> out;
  switch (topology) {
    case Topology::Linear:
    case Topology::Cyclic: {
      require(neighbor_order >= 1, ErrorKind::InvalidArgument,
              "connectivity: neighbor_order must be >= 1");
      for (int d = 1; d <= neighbor_order; ++d) {
        for (int i = 0; i < n_sites; ++i) {
          int j = i + d;
          if (topology == Topology::Linear) {
            if (j >= n_sites) continue;
          } else {
            j %= n_sites;
            if (j == i) continue;
          }
          out.insert(ordered(i, j));
        }
      }
      break;
    }
    case Topology::Pairs: {
      for (const auto& p : pairs) {
        require(p.a != p.b && p.a >= 0 && p.b >= 0 && p.a < n_sites && p.b < n_sites,
                ErrorKind::InvalidArgument,
                "connectivity: pair (" + std::to_string(p.a) + "," + std::to_string(p.b) +
                    ") is out of range or self-coupled");
        const bool inserted = out.insert(ordered(p.a, p.b)).second;
        require(inserted, ErrorKind::InvalidArgument, "connectivity: duplicate pair");
      }
      break;
    }
  }
  return {out.begin(), out.end()};
}

std::vector<SitePair> retained_pairs(const Connectivity& conn,
                                     const std::vector<MonomerData>& monomers) {
  require(conn.n_sites == static_cast<int>(monomers.size()), ErrorKind::DimensionMismatch,
          "connectivity: n_sites " + std::to_string(conn.n_sites) + " does not match " +
              std::to_string(monomers.size()) + " monomers");
  auto pairs = conn.topological_pairs();
  if (conn.cutoff) {
    require(*conn.cutoff > 0.0, ErrorKind::InvalidArgument, "connectivity: cutoff must be positive");
    std::erase_if(pairs, [&](const SitePair& p) {
      const Vec3 r = monomers[p.a].com - monomers[p.b].com;
      return std::sqrt(dot(r, r)) > *conn.cutoff;
    });
  }
  return pairs;
}

double dipole_coupling(const Vec3& mu_a, const Vec3& mu_b, const Vec3& com_a, const Vec3& com_b) {
  const Vec3 r = com_b - com_a;
  const double dist = std::sqrt(dot(r, r));
  require(dist > 0.0, ErrorKind::DegenerateGeometry,
          "dipole_coupling: coincident centers of mass");
  const Vec3 n = (1.0 / dist) * r;
  return (dot(mu_a, mu_b) - 3.0 * dot(mu_a, n) * dot(mu_b, n)) / (dist * dist * dist);
}

void validate_monomers(const std::vector<MonomerData>& monomers) {
  require(!monomers.empty(), ErrorKind::InvalidArgument, "monomers: list is empty");
  for (std::size_t i = 0; i < monomers.size(); ++i) {
    const auto& m = monomers[i];
    const std::string where = "monomer " + std::to_string(i);
    require(m.index == static_cast<int>(i), ErrorKind::InvalidArgument,
            where + ": index " + std::to_string(m.index) + " out of sequence");
    require(std::isfinite(m.e_s0) && std::isfinite(m.e_s1) && std::isfinite(m.x_intra) &&
                finite(m.com) && finite(m.mu_00) && finite(m.mu_11) && finite(m.mu_01),
            ErrorKind::InvalidArgument, where + ": non-finite entry");
    require(m.e_s1 >= m.e_s0, ErrorKind::InvalidArgument,
            where + ": excited-state energy below ground-state energy");
  }
}

ExcitonHamiltonian build_hamiltonian(const std::vector<MonomerData>& monomers,
                                     const Connectivity& conn) {
  validate_monomers(monomers);
  const auto pairs = retained_pairs(conn, monomers);
  const int n = static_cast<int>(monomers.size());

  ExcitonHamiltonian h;
  h.n_sites = n;
  h.z.assign(n, 0.0);
  h.x.assign(n, 0.0);

  // One-body: S_A, D_A = (E0 - E1)/2, X_A.
  std::vector<Vec3> sum(n), diff(n);
  for (int a = 0; a < n; ++a) {
    const auto& m = monomers[a];
    h.e_scalar += 0.5 * (m.e_s0 + m.e_s1);
    h.z[a] = 0.5 * (m.e_s0 - m.e_s1);
    h.x[a] = m.x_intra;
    sum[a] = 0.5 * (m.mu_00 + m.mu_11);
    diff[a] = 0.5 * (m.mu_00 - m.mu_11);
  }

  for (const auto& p : pairs) {
    const auto& ma = monomers[p.a];
    const auto& mb = monomers[p.b];
    auto v = [&](const Vec3& u, const Vec3& w) { return dipole_coupling(u, w, ma.com, mb.com); };

    h.e_scalar += v(sum[p.a], sum[p.b]);
    h.z[p.a] += v(diff[p.a], sum[p.b]);
    h.z[p.b] += v(sum[p.a], diff[p.b]);
    h.x[p.a] += v(ma.mu_01, sum[p.b]);
    h.x[p.b] += v(sum[p.a], mb.mu_01);

    PairCoefficients c;
    c.sites = p;
    c.xx = v(ma.mu_01, mb.mu_01);
    c.xz = v(ma.mu_01, diff[p.b]);
    c.zx = v(diff[p.a], mb.mu_01);
    c.zz = v(diff[p.a], diff[p.b]);
    h.pairs.push_back(c);
  }
  return h;
}

std::vector<PauliTerm> ExcitonHamiltonian::terms() const {
  std::vector<PauliTerm> out;
  out.push_back(PauliTerm::identity(e_scalar));
  for (int a = 0; a < n_sites; ++a) {
    if (z[a] != 0.0) out.push_back(PauliTerm::single(z[a], a, Axis::Z));
    if (x[a] != 0.0) out.push_back(PauliTerm::single(x[a], a, Axis::X));
  }
  for (const auto& p : pairs) {
    const int a = p.sites.a, b = p.sites.b;
    if (p.xx != 0.0) out.push_back(PauliTerm::pair(p.xx, a, Axis::X, b, Axis::X));
    if (p.xz != 0.0) out.push_back(PauliTerm::pair(p.xz, a, Axis::X, b, Axis::Z));
    if (p.zx != 0.0) out.push_back(PauliTerm::pair(p.zx, a, Axis::Z, b, Axis::X));
    if (p.zz != 0.0) out.push_back(PauliTerm::pair(p.zz, a, Axis::Z, b, Axis::Z));
  }
  return out;
}

DipoleOperator build_dipole_operator(const std::vector<MonomerData>& monomers) {
  validate_monomers(monomers);
  DipoleOperator d;
  for (const auto& m : monomers) {
    d.mu_i.push_back(0.5 * (m.mu_11 + m.mu_00));
    d.mu_z.push_back(0.5 * (m.mu_11 - m.mu_00));
    d.mu_x.push_back(m.mu_01);
  }
  return d;
}

std::vector<PauliTerm> DipoleOperator::component_terms(int axis) const {
  require(axis >= 0 && axis < 3, ErrorKind::InvalidArgument, "dipole: axis must be 0, 1 or 2");
  double identity = 0.0;
  std::vector<PauliTerm> out;
  for (int a = 0; a < n_sites(); ++a) {
    identity += mu_i[a][axis];
    if (mu_z[a][axis] != 0.0) out.push_back(PauliTerm::single(-mu_z[a][axis], a, Axis::Z));
    if (mu_x[a][axis] != 0.0) out.push_back(PauliTerm::single(mu_x[a][axis], a, Axis::X));
  }
  out.insert(out.begin(), PauliTerm::identity(identity));
  return out;
}

}  // namespace mcvqe
