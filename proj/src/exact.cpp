#include "mcvqe/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mcvqe/error.hpp"
#include "mcvqe/numerics.hpp"
#include "mcvqe/rng.hpp"

namespace mcvqe {

namespace {

using Vec = std::vector<double>;

void canonical_sign(Vec& v) {
  for (double x : v) {
    if (std::abs(x) > 1e-10) {
      if (x < 0.0)
        for (double& y : v) y = -y;
      return;
    }
  }
}

void axpy(double a, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

FciResult dense_solve(const ExcitonHamiltonian& h, int k, const FciOptions& opts) {
  const auto terms = h.terms();
  const auto eig = numerics::eigh(to_dense(terms, h.n_sites, opts.dense_cap));
  const CompiledOperator op(terms, h.n_sites);
  FciResult out;
  out.dense = true;
  Vec hv(eig.vectors.rows());
  for (int j = 0; j < k; ++j) {
    Vec v = eig.vectors.column(j);
    canonical_sign(v);
    op.apply(v, hv);
    axpy(-eig.values[j], v, hv);
    out.energies.push_back(eig.values[j]);
    out.residuals.push_back(norm2(hv));
    out.vectors.emplace_back(h.n_sites, std::move(v));
  }
  return out;
}

// Restarted Lanczos with full reorthogonalization. Every restart keeps the
// lowest unconverged Ritz vectors, the residual direction, and one fresh random
// vector; the random vector is what lets a single-vector Krylov space pick up
// further copies of a degenerate level. Converged pairs are locked from the
// bottom of the spectrum and projected out.
class Lanczos {
 public:
  Lanczos(const CompiledOperator& op, std::size_t dim, int k, const FciOptions& opts)
      : op_(op), dim_(dim), k_(k), target_(k), opts_(opts), rng_(opts.seed) {
    const int auto_m = std::max(2 * k + 20, 40);
    m_ = static_cast<std::size_t>(opts.krylov_dim > 0 ? opts.krylov_dim : auto_m);
    m_ = std::min<std::size_t>(m_, dim_ - std::min<std::size_t>(dim_, k_));
    m_ = std::max<std::size_t>(m_, 2);
  }

  FciResult run() {
    Vec next = random_vector();
    bool verifying = false;
    for (;;) {
      expand(next);
      const auto ritz = rayleigh_ritz();
      const int want = target_ - static_cast<int>(locked_.size());
      std::size_t n_lock = 0;
      while (n_lock < ritz.size() && static_cast<int>(n_lock) < want &&
             ritz[n_lock].residual < tolerance(ritz[n_lock].value))
        ++n_lock;

      if (verifying) {
        verifying = false;
        const double top = max_locked();
        if (!ritz.empty() && ritz[0].value < top - 1e-9 &&
            target_ < static_cast<int>(dim_) - 1) {
          ++target_;  // something below the locked set was missed
          continue_from(ritz, 0, next);
          continue;
        }
        break;
      }

      for (std::size_t i = 0; i < n_lock; ++i) lock(ritz[i]);
      if (static_cast<int>(locked_.size()) >= target_) {
        if (static_cast<std::size_t>(target_) + 1 >= dim_) break;
        verifying = true;
        basis_.clear();
        hbasis_.clear();
        next = random_vector();
        continue;
      }
      if (++restarts_ > opts_.max_restarts) {
        std::ostringstream msg;
        msg << "fci: Lanczos did not converge after " << opts_.max_restarts
            << " restarts; best residuals";
        for (std::size_t i = 0; i < ritz.size() && static_cast<int>(i) < want; ++i)
          msg << ' ' << ritz[i].residual;
        fail(ErrorKind::NotConverged, msg.str());
      }
      continue_from(ritz, n_lock, next);
    }
    return finish();
  }

 private:
  struct Ritz {
    double value;
    double residual;
    Vec y, hy, r;
  };

  double tolerance(double value) const { return opts_.tol * std::max(1.0, std::abs(value)); }

  double max_locked() const {
    double m = -HUGE_VAL;
    for (double v : locked_values_) m = std::max(m, v);
    return m;
  }

  Vec random_vector() {
    Vec v(dim_);
    for (double& x : v) x = rng_.normal();
    return v;
  }

  Vec apply(const Vec& v) {
    Vec out(dim_);
    op_.apply(v, out);
    ++matvecs_;
    return out;
  }

  // Orthogonalize against locked and basis vectors (two passes); returns the norm.
  double orthogonalize(Vec& w) const {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& x : locked_) axpy(-dot(x, w), x, w);
      for (const auto& v : basis_) axpy(-dot(v, w), v, w);
    }
    return norm2(w);
  }

  void push(Vec w) {
    double before = norm2(w);
    double after = orthogonalize(w);
    while (!(after > 1e-8 * std::max(before, 1e-300))) {
      w = random_vector();
      before = norm2(w);
      after = orthogonalize(w);
    }
    for (double& x : w) x /= after;
    hbasis_.push_back(apply(w));
    basis_.push_back(std::move(w));
  }

  void expand(Vec& next) {
    while (basis_.size() < m_ && basis_.size() + locked_.size() < dim_) {
      push(std::move(next));
      next = hbasis_.back();
    }
  }

  std::vector<Ritz> rayleigh_ritz() const {
    const std::size_t m = basis_.size();
    Matrix t(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        const double x = 0.5 * (dot(basis_[i], hbasis_[j]) + dot(basis_[j], hbasis_[i]));
        t(i, j) = x;
        t(j, i) = x;
      }
    const auto eig = numerics::eigh(t);
    const std::size_t want = static_cast<std::size_t>(std::max(0, target_ - static_cast<int>(locked_.size())));
    const std::size_t n_ritz = std::min(m, std::max<std::size_t>(want + 8, 2 * want));
    std::vector<Ritz> out;
    for (std::size_t i = 0; i < n_ritz; ++i) {
      Ritz r{eig.values[i], 0.0, Vec(dim_, 0.0), Vec(dim_, 0.0), {}};
      for (std::size_t j = 0; j < m; ++j) {
        const double s = eig.vectors(j, i);
        axpy(s, basis_[j], r.y);
        axpy(s, hbasis_[j], r.hy);
      }
      r.r = r.hy;
      axpy(-r.value, r.y, r.r);
      r.residual = norm2(r.r);
      out.push_back(std::move(r));
    }
    return out;
  }

  void lock(const Ritz& r) {
    locked_.push_back(r.y);
    locked_values_.push_back(r.value);
  }

  void continue_from(const std::vector<Ritz>& ritz, std::size_t first, Vec& next) {
    const std::size_t room = m_ > 3 ? m_ - 3 : 1;
    const std::size_t keep = std::min(ritz.size() - std::min(first, ritz.size()), room / 2 + 1);
    basis_.clear();
    hbasis_.clear();
    for (std::size_t i = first; i < first + keep; ++i) {
      basis_.push_back(ritz[i].y);
      hbasis_.push_back(ritz[i].hy);
    }
    if (basis_.size() + locked_.size() < dim_) push(random_vector());
    next = first < ritz.size() ? ritz[first].r : random_vector();
  }

  FciResult finish() {
    std::vector<std::size_t> order(locked_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return locked_values_[a] < locked_values_[b]; });
    FciResult out;
    out.restarts = restarts_;
    for (int j = 0; j < k_; ++j) {
      Vec v = locked_[order[j]];
      const double nrm = norm2(v);
      for (double& x : v) x /= nrm;
      canonical_sign(v);
      Vec hv = apply(v);
      const double e = dot(v, hv);
      axpy(-e, v, hv);
      out.energies.push_back(e);
      out.residuals.push_back(norm2(hv));
      out.vectors.emplace_back(static_cast<int>(std::countr_zero(dim_)), std::move(v));
    }
    out.matvecs = matvecs_;
    return out;
  }

  const CompiledOperator& op_;
  std::size_t dim_;
  int k_;
  int target_ = 0;
  FciOptions opts_;
  Rng rng_;
  std::size_t m_ = 0;
  std::vector<Vec> basis_, hbasis_, locked_;
  std::vector<double> locked_values_;
  int restarts_ = 0;
  int matvecs_ = 0;
};

}  // namespace

FciResult fci_solve(const ExcitonHamiltonian& h, int k, const FciOptions& opts) {
  const int n = h.n_sites;
  require(n >= 1, ErrorKind::InvalidArgument, "fci: empty Hamiltonian");
  require(n <= opts.max_sites, ErrorKind::CapExceeded,
          "fci: " + std::to_string(n) + " sites exceeds the limit of " +
              std::to_string(opts.max_sites));
  const std::size_t dim = std::size_t{1} << n;
  require(k >= 1 && static_cast<std::size_t>(k) <= dim, ErrorKind::InvalidArgument,
          "fci: requested state count outside [1, 2^N]");
  require(opts.tol > 0.0, ErrorKind::InvalidArgument, "fci: tolerance must be positive");
  // Lanczos needs room beyond the wanted pairs; tiny spaces go dense.
  const bool tiny = dim <= static_cast<std::size_t>(2 * k + 4);
  if ((!opts.force_iterative && n <= opts.dense_threshold) || tiny) {
    require(n <= opts.dense_cap, ErrorKind::CapExceeded, "fci: dense path above the dense cap");
    return dense_solve(h, k, opts);
  }
  const auto terms = h.terms();
  const CompiledOperator op(terms, n);
  return Lanczos(op, dim, k, opts).run();
}

}  // namespace mcvqe
