#include "mcvqe/pauli.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <string>

#include "mcvqe/error.hpp"

namespace mcvqe {

PauliTerm PauliTerm::pair(double c, int site_a, Axis a, int site_b, Axis b) {
  if (site_a < site_b) return {c, {{site_a, a}, {site_b, b}}};
  return {c, {{site_b, b}, {site_a, a}}};
}

void validate_terms(std::span<const PauliTerm> terms, int n_sites) {
  require(n_sites >= 1 && n_sites <= kMaxQubits, ErrorKind::CapExceeded,
          "pauli: site count " + std::to_string(n_sites) + " outside [1, " +
              std::to_string(kMaxQubits) + "]");
  for (const auto& t : terms) {
    int prev = -1;
    int n_y = 0;
    for (const auto& f : t.factors) {
      require(f.site >= 0 && f.site < n_sites, ErrorKind::InvalidArgument,
              "pauli: factor site out of range");
      require(f.site > prev, ErrorKind::InvalidArgument,
              "pauli: factor sites must be strictly increasing");
      prev = f.site;
      if (f.axis == Axis::Y) ++n_y;
    }
    require(n_y % 2 == 0, ErrorKind::InvalidArgument,
            "pauli: odd number of Y factors gives a non-real operator");
  }
}

namespace {

struct TermShape {
  Config flip = 0;
  Config sign = 0;   // Z and Y sites
  double phase = 1;  // i^{n_Y}, real for even n_Y
};

TermShape shape_of(const PauliTerm& t, int n_sites) {
  TermShape s;
  int n_y = 0;
  for (const auto& f : t.factors) {
    const Config m = site_mask(n_sites, f.site);
    switch (f.axis) {
      case Axis::X: s.flip |= m; break;
      case Axis::Y: s.flip |= m; s.sign |= m; ++n_y; break;
      case Axis::Z: s.sign |= m; break;
    }
  }
  s.phase = (n_y / 2) % 2 == 0 ? 1.0 : -1.0;
  return s;
}

inline double parity_sign(Config bits) {
  return (std::popcount(bits) & 1) ? -1.0 : 1.0;
}

}  // namespace

double pauli_matrix_element(int n_sites, Config bra, Config ket, std::span<const PauliTerm> terms) {
  require(n_sites >= 1 && n_sites <= 63, ErrorKind::InvalidArgument, "pauli: bad site count");
  const Config limit = Config{1} << n_sites;
  require(bra < limit && ket < limit, ErrorKind::DimensionMismatch,
          "pauli: configuration has more bits than sites");
  const Config flip = bra ^ ket;
  double value = 0.0;
  for (const auto& t : terms) {
    const TermShape s = shape_of(t, n_sites);
    if (s.flip != flip) continue;
    value += t.coefficient * s.phase * parity_sign(ket & s.sign);
  }
  return value;
}

Matrix to_dense(std::span<const PauliTerm> terms, int n_sites, int dense_cap) {
  require(n_sites <= dense_cap, ErrorKind::CapExceeded,
          "to_dense: " + std::to_string(n_sites) + " sites exceeds dense cap " +
              std::to_string(dense_cap));
  validate_terms(terms, n_sites);
  const std::size_t dim = std::size_t{1} << n_sites;
  Matrix m(dim, dim);
  std::vector<TermShape> shapes;
  shapes.reserve(terms.size());
  for (const auto& t : terms) shapes.push_back(shape_of(t, n_sites));
  for (Config ket = 0; ket < dim; ++ket) {
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const Config bra = ket ^ shapes[k].flip;
      m(bra, ket) += terms[k].coefficient * shapes[k].phase * parity_sign(ket & shapes[k].sign);
    }
  }
  return m;
}

CompiledOperator::CompiledOperator(std::span<const PauliTerm> terms, int n_sites)
    : n_sites_(n_sites), lo_bits_(std::min(n_sites, 10)) {
  validate_terms(terms, n_sites);
  std::vector<TermShape> shapes;
  shapes.reserve(terms.size());
  for (const auto& t : terms) shapes.push_back(shape_of(t, n_sites));

  std::map<Config, std::vector<std::size_t>> by_flip;
  for (std::size_t k = 0; k < terms.size(); ++k) by_flip[shapes[k].flip].push_back(k);

  const std::size_t lo_dim = std::size_t{1} << lo_bits_;
  const std::size_t hi_dim = std::size_t{1} << (n_sites - lo_bits_);
  for (const auto& [flip, members] : by_flip) {
    Group g;
    g.flip = flip;
    Config sign_union = 0;
    for (std::size_t k : members) sign_union |= shapes[k].sign;
    std::vector<int> bits;
    for (int b = 0; b < n_sites; ++b)
      if ((sign_union >> b) & 1u) bits.push_back(b);

    auto compress = [&](Config ket) {
      std::uint32_t p = 0;
      for (std::size_t j = 0; j < bits.size(); ++j)
        if ((ket >> bits[j]) & 1u) p |= std::uint32_t{1} << j;
      return p;
    };
    g.lo_index.resize(lo_dim);
    for (std::size_t lo = 0; lo < lo_dim; ++lo) g.lo_index[lo] = compress(lo);
    g.hi_index.resize(hi_dim);
    for (std::size_t hi = 0; hi < hi_dim; ++hi) g.hi_index[hi] = compress(Config{hi} << lo_bits_);

    g.table.assign(std::size_t{1} << bits.size(), 0.0);
    for (std::size_t p = 0; p < g.table.size(); ++p) {
      Config ket = 0;
      for (std::size_t j = 0; j < bits.size(); ++j)
        if ((p >> j) & 1u) ket |= Config{1} << bits[j];
      double c = 0.0;
      for (std::size_t k : members)
        c += terms[k].coefficient * shapes[k].phase * parity_sign(ket & shapes[k].sign);
      g.table[p] = c;
    }
    groups_.push_back(std::move(g));
  }
}

// Visits each unordered pair {k, k ^ flip} once (pair(k, k2, c)) or, for the
// diagonal group, each ket (diag(k, c)). The operator is real symmetric, so the
// coefficient is the same from either end.
template <class Pair, class Diag>
void CompiledOperator::visit(const Group& g, Pair&& pair, Diag&& diag) const {
  const int lb = lo_bits_;
  const std::size_t lo_dim = std::size_t{1} << lb;
  const std::size_t hi_dim = std::size_t{1} << (n_sites_ - lb);
  const std::size_t f_hi = g.flip >> lb;
  const std::size_t f_lo = g.flip & (lo_dim - 1);
  const double* table = g.table.data();
  const std::uint32_t* lo_index = g.lo_index.data();
  if (g.flip == 0) {
    for (std::size_t hi = 0; hi < hi_dim; ++hi) {
      const std::size_t base = hi << lb;
      const double* row = table + g.hi_index[hi];
      for (std::size_t lo = 0; lo < lo_dim; ++lo) diag(base | lo, row[lo_index[lo]]);
    }
  } else if (f_hi != 0) {
    const std::size_t top = std::bit_floor(f_hi);
    for (std::size_t hi = 0; hi < hi_dim; ++hi) {
      if (hi & top) continue;
      const std::size_t base = hi << lb, partner = (hi ^ f_hi) << lb;
      const double* row = table + g.hi_index[hi];
      for (std::size_t lo = 0; lo < lo_dim; ++lo)
        pair(base | lo, partner | (lo ^ f_lo), row[lo_index[lo]]);
    }
  } else {
    const int t = std::countr_zero(std::bit_floor(f_lo));
    const std::size_t low_mask = (std::size_t{1} << t) - 1;
    for (std::size_t hi = 0; hi < hi_dim; ++hi) {
      const std::size_t base = hi << lb;
      const double* row = table + g.hi_index[hi];
      for (std::size_t j = 0; j < lo_dim / 2; ++j) {
        const std::size_t lo = ((j & ~low_mask) << 1) | (j & low_mask);
        pair(base | lo, base | (lo ^ f_lo), row[lo_index[lo]]);
      }
    }
  }
}

double CompiledOperator::matrix_element(std::span<const double> phi,
                                        std::span<const double> psi) const {
  const std::size_t dim = std::size_t{1} << n_sites_;
  require(phi.size() == dim && psi.size() == dim, ErrorKind::DimensionMismatch,
          "operator: state dimension mismatch");
  const double* a = phi.data();
  const double* b = psi.data();
  double total = 0.0;
  for (const auto& g : groups_) {
    double s = 0.0;
    visit(
        g,
        [&](std::size_t k, std::size_t k2, double c) { s += c * (a[k2] * b[k] + a[k] * b[k2]); },
        [&](std::size_t k, double c) { s += c * a[k] * b[k]; });
    total += s;
  }
  return total;
}

double CompiledOperator::expectation(std::span<const double> psi) const {
  const std::size_t dim = std::size_t{1} << n_sites_;
  require(psi.size() == dim, ErrorKind::DimensionMismatch, "operator: state dimension mismatch");
  const double* a = psi.data();
  double total = 0.0;
  for (const auto& g : groups_) {
    double s = 0.0;
    if (g.flip == 0) {
      visit(g, [](std::size_t, std::size_t, double) {},
            [&](std::size_t k, double c) { s += c * a[k] * a[k]; });
    } else {
      visit(g, [&](std::size_t k, std::size_t k2, double c) { s += c * a[k] * a[k2]; },
            [](std::size_t, double) {});
      s *= 2.0;
    }
    total += s;
  }
  return total;
}

void CompiledOperator::apply(std::span<const double> psi, std::span<double> out) const {
  const std::size_t dim = std::size_t{1} << n_sites_;
  require(psi.size() == dim && out.size() == dim, ErrorKind::DimensionMismatch,
          "operator: state dimension mismatch");
  const double* a = psi.data();
  double* o = out.data();
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& g : groups_) {
    visit(
        g,
        [&](std::size_t k, std::size_t k2, double c) {
          o[k2] += c * a[k];
          o[k] += c * a[k2];
        },
        [&](std::size_t k, double c) { o[k] += c * a[k]; });
  }
}

}  // namespace mcvqe
