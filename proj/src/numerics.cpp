#include "mcvqe/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mcvqe/error.hpp"

namespace mcvqe::numerics {

namespace {

// Householder reduction to tridiagonal form; `v` is overwritten with the
// accumulated orthogonal transformation (columns), `d`/`e` receive the
// diagonal and subdiagonal.
void tridiagonalize(std::vector<std::vector<double>>& v, std::vector<double>& d,
                    std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  for (int j = 0; j < n; ++j) d[j] = v[n - 1][j];

  for (int i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (int k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (int j = 0; j < i; ++j) {
        d[j] = v[i - 1][j];
        v[i][j] = 0.0;
        v[j][i] = 0.0;
      }
    } else {
      for (int k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (int j = 0; j < i; ++j) e[j] = 0.0;

      for (int j = 0; j < i; ++j) {
        f = d[j];
        v[j][i] = f;
        g = e[j] + v[j][j] * f;
        for (int k = j + 1; k <= i - 1; ++k) {
          g += v[k][j] * d[k];
          e[k] += v[k][j] * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (int j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (int j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (int k = j; k <= i - 1; ++k) v[k][j] -= (f * e[k] + g * d[k]);
        d[j] = v[i - 1][j];
        v[i][j] = 0.0;
      }
    }
    d[i] = h;
  }

  for (int i = 0; i < n - 1; ++i) {
    v[n - 1][i] = v[i][i];
    v[i][i] = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (int k = 0; k <= i; ++k) d[k] = v[k][i + 1] / h;
      for (int j = 0; j <= i; ++j) {
        double g = 0.0;
        for (int k = 0; k <= i; ++k) g += v[k][i + 1] * v[k][j];
        for (int k = 0; k <= i; ++k) v[k][j] -= g * d[k];
      }
    }
    for (int k = 0; k <= i; ++k) v[k][i + 1] = 0.0;
  }
  for (int j = 0; j < n; ++j) {
    d[j] = v[n - 1][j];
    v[n - 1][j] = 0.0;
  }
  v[n - 1][n - 1] = 1.0;
  e[0] = 0.0;
}

// Implicit QL on the tridiagonal (d, e). `zt` holds eigenvectors as rows so
// each plane rotation touches two contiguous rows.
void tridiagonal_ql(std::vector<std::vector<double>>& zt, std::vector<double>& d,
                    std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    int m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 100) fail(ErrorKind::NotConverged, "eigh: QL iteration did not converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = c, c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          auto& zi = zt[i];
          auto& zi1 = zt[i + 1];
          for (int k = 0; k < n; ++k) {
            const double hk = zi1[k];
            zi1[k] = s * zi[k] + c * hk;
            zi[k] = c * zi[k] - s * hk;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

}  // namespace

EighResult eigh(const Matrix& m) {
  require(m.rows() == m.cols(), ErrorKind::DimensionMismatch, "eigh: matrix is not square");
  const std::size_t n = m.rows();
  EighResult out;
  if (n == 0) return out;

  const double scale = std::max(1.0, m.max_abs());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      require(std::abs(m(i, j) - m(j, i)) <= 1e-10 * scale, ErrorKind::InvalidArgument,
              "eigh: matrix is not symmetric");

  std::vector<std::vector<double>> v(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) v[i][j] = 0.5 * (m(i, j) + m(j, i));
  std::vector<double> d(n), e(n);
  tridiagonalize(v, d, e);

  std::vector<std::vector<double>> zt(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) zt[j][i] = v[i][j];
  tridiagonal_ql(zt, d, e);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = d[order[c]];
    const auto& z = zt[order[c]];
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = z[r];
  }
  return out;
}

Mat4 expm_antisym4(const Mat4& a) {
  double norm1 = 0.0;
  for (int j = 0; j < 4; ++j) {
    double col = 0.0;
    for (int i = 0; i < 4; ++i) {
      require(std::abs(a[i][j] + a[j][i]) <= 1e-12 * std::max(1.0, std::abs(a[i][j])),
              ErrorKind::InvalidArgument, "expm_antisym4: input is not antisymmetric");
      col += std::abs(a[i][j]);
    }
    norm1 = std::max(norm1, col);
  }

  int squarings = 0;
  if (norm1 > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.25)));
  const double factor = std::ldexp(1.0, -squarings);

  Mat4 b{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) b[i][j] = a[i][j] * factor;

  Mat4 result = identity4();
  Mat4 term = identity4();
  for (int k = 1; k <= 40; ++k) {
    term = matmul(term, b);
    double tmax = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        term[i][j] /= k;
        result[i][j] += term[i][j];
        tmax = std::max(tmax, std::abs(term[i][j]));
      }
    if (tmax < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) result = matmul(result, result);
  return result;
}

std::vector<double> fd_gradient(const Objective& f, std::span<const double> x, double step) {
  require(step > 0.0, ErrorKind::InvalidArgument, "fd_gradient: step must be positive");
  std::vector<double> g(x.size());
  std::vector<double> xp(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + step;
    const double fp = f(xp);
    xp[i] = x[i] - step;
    const double fm = f(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

namespace {

void record(OptimizeResult& res, const OptimizerOptions& opts, TraceEntry e) {
  res.trace.push_back(e);
  if (opts.on_iterate) opts.on_iterate(e);
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct LineSearchResult {
  bool ok = false;
  double alpha = 0.0;
  double value = 0.0;
  std::vector<double> gradient;
};

// Strong-Wolfe line search (bracketing + zoom with safeguarded quadratic
// interpolation). Gradients are only requested at points that satisfy the
// sufficient-decrease condition.
class WolfeSearch {
 public:
  WolfeSearch(const Objective& f, const Gradient& grad, const OptimizerOptions& opts,
              std::span<const double> x, std::span<const double> d, double f0, double dphi0,
              int& evaluations)
      : f_(f), grad_(grad), opts_(opts), x_(x), d_(d), f0_(f0), dphi0_(dphi0),
        evaluations_(evaluations), trial_(x.size()) {}

  LineSearchResult run(double alpha0) {
    double a_prev = 0.0, f_prev = f0_, dphi_prev = dphi0_;
    std::vector<double> g_prev;
    double a = alpha0;
    for (int i = 0; i < opts_.max_linesearch; ++i) {
      const double fa = value(a);
      if (!std::isfinite(fa) || fa > f0_ + opts_.c1 * a * dphi0_ || (i > 0 && fa >= f_prev))
        return zoom(a_prev, f_prev, dphi_prev, g_prev, a, fa);
      auto ga = gradient(a);
      const double dphia = dot(ga, d_);
      if (std::abs(dphia) <= -opts_.c2 * dphi0_) return {true, a, fa, std::move(ga)};
      if (dphia >= 0.0) return zoom(a, fa, dphia, ga, a_prev, f_prev);
      a_prev = a;
      f_prev = fa;
      dphi_prev = dphia;
      g_prev = std::move(ga);
      a *= 2.0;
    }
    return fallback(a_prev, f_prev, g_prev);
  }

 private:
  double value(double a) {
    for (std::size_t i = 0; i < x_.size(); ++i) trial_[i] = x_[i] + a * d_[i];
    ++evaluations_;
    return f_(trial_);
  }

  std::vector<double> gradient(double a) {
    for (std::size_t i = 0; i < x_.size(); ++i) trial_[i] = x_[i] + a * d_[i];
    return grad_(trial_);
  }

  LineSearchResult zoom(double lo, double flo, double dlo, std::vector<double> glo, double hi,
                        double fhi) {
    for (int j = 0; j < opts_.max_linesearch; ++j) {
      const double width = hi - lo;
      double a = lo + 0.5 * width;
      const double denom = 2.0 * (fhi - flo - dlo * width);
      if (denom != 0.0) {
        const double q = lo - dlo * width * width / denom;
        const double left = std::min(lo, hi) + 0.1 * std::abs(width);
        const double right = std::max(lo, hi) - 0.1 * std::abs(width);
        if (std::isfinite(q) && q > left && q < right) a = q;
      }
      if (std::abs(width) < 1e-16 * std::max(1.0, std::abs(lo))) break;
      const double fa = value(a);
      if (!std::isfinite(fa) || fa > f0_ + opts_.c1 * a * dphi0_ || fa >= flo) {
        hi = a;
        fhi = fa;
        continue;
      }
      auto ga = gradient(a);
      const double dphia = dot(ga, d_);
      if (std::abs(dphia) <= -opts_.c2 * dphi0_) return {true, a, fa, std::move(ga)};
      if (dphia * (hi - lo) >= 0.0) {
        hi = lo;
        fhi = flo;
      }
      lo = a;
      flo = fa;
      dlo = dphia;
      glo = std::move(ga);
    }
    return fallback(lo, flo, glo);
  }

  // Accept the best sufficient-decrease point even without the curvature
  // condition; report failure if there is none.
  LineSearchResult fallback(double a, double fa, std::vector<double> ga) {
    if (a > 0.0 && fa < f0_ && !ga.empty()) return {true, a, fa, std::move(ga)};
    return {};
  }

  const Objective& f_;
  const Gradient& grad_;
  const OptimizerOptions& opts_;
  std::span<const double> x_;
  std::span<const double> d_;
  double f0_;
  double dphi0_;
  int& evaluations_;
  std::vector<double> trial_;
};

}  // namespace

OptimizeResult lbfgs(const Objective& f, const Gradient& grad, std::vector<double> x0,
                     const OptimizerOptions& opts) {
  require(opts.gtol > 0.0 && opts.memory > 0, ErrorKind::InvalidArgument,
          "lbfgs: tolerances and memory must be positive");
  const std::size_t n = x0.size();
  OptimizeResult res;
  std::vector<double> x = std::move(x0);
  double fx = f(x);
  res.evaluations = 1;
  std::vector<double> g = grad(x);
  double gmax = max_abs(g);
  record(res, opts, {0, fx, gmax});
  res.x = x;
  res.value = fx;
  res.gradient_max = gmax;

  if (gmax < opts.gtol) {
    res.converged = true;
    res.status = "converged";
    return res;
  }

  std::vector<std::vector<double>> s_hist, y_hist;
  std::vector<double> rho_hist;
  std::vector<double> d(n), alpha_buf;

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    // two-loop recursion
    for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
    const std::size_t m = s_hist.size();
    alpha_buf.assign(m, 0.0);
    for (std::size_t k = m; k-- > 0;) {
      alpha_buf[k] = rho_hist[k] * dot(s_hist[k], d);
      for (std::size_t i = 0; i < n; ++i) d[i] -= alpha_buf[k] * y_hist[k][i];
    }
    if (m > 0) {
      const double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
      for (double& v : d) v *= gamma;
    }
    for (std::size_t k = 0; k < m; ++k) {
      const double beta = rho_hist[k] * dot(y_hist[k], d);
      for (std::size_t i = 0; i < n; ++i) d[i] += (alpha_buf[k] - beta) * s_hist[k][i];
    }

    double dphi0 = dot(g, d);
    if (!(dphi0 < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      dphi0 = dot(g, d);
    }
    const double alpha0 =
        s_hist.empty() ? std::min(1.0, opts.initial_step / max_abs(d)) : 1.0;

    WolfeSearch search(f, grad, opts, x, d, fx, dphi0, res.evaluations);
    LineSearchResult ls = search.run(alpha0);
    if (!ls.ok) {
      res.status = "line search failed";
      res.iterations = iter - 1;
      return res;
    }

    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = ls.alpha * d[i];
      y[i] = ls.gradient[i] - g[i];
      x[i] += s[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-14 * norm2(s) * norm2(y)) {
      if (static_cast<int>(s_hist.size()) == opts.memory) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    fx = ls.value;
    g = std::move(ls.gradient);
    gmax = max_abs(g);
    record(res, opts, {iter, fx, gmax});
    res.iterations = iter;
    if (fx <= res.value) {
      res.x = x;
      res.value = fx;
      res.gradient_max = gmax;
    }
    if (gmax < opts.gtol) {
      res.converged = true;
      res.status = "converged";
      return res;
    }
  }
  res.status = "iteration limit reached";
  return res;
}

namespace {

// One-dimensional minimization of f(x + t d) in t: golden-section bracketing
// followed by Brent's parabolic/golden search.
class LineMinimizer {
 public:
  LineMinimizer(const Objective& f, int& evaluations) : f_(f), evaluations_(evaluations) {}

  // Returns (t_min, f_min) and updates x in place.
  double minimize(std::vector<double>& x, std::span<const double> d, double f0) {
    x0_ = x;
    d_.assign(d.begin(), d.end());
    trial_.resize(x.size());

    double a = 0.0, b = 1.0;
    double fa = f0, fb = eval(b);
    constexpr double kGold = 1.618033988749895;
    if (fb > fa) {
      std::swap(a, b);
      std::swap(fa, fb);
    }
    double c = b + kGold * (b - a);
    double fc = eval(c);
    int guard = 0;
    while (fb > fc && guard++ < 60) {
      a = b;
      fa = fb;
      b = c;
      fb = fc;
      c = b + kGold * (b - a);
      fc = eval(c);
    }
    auto [t, ft] = brent(a, b, c, fb);
    if (ft > f0) {
      t = 0.0;
      ft = f0;
    }
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = x0_[i] + t * d_[i];
    return ft;
  }

 private:
  double eval(double t) {
    for (std::size_t i = 0; i < x0_.size(); ++i) trial_[i] = x0_[i] + t * d_[i];
    ++evaluations_;
    return f_(trial_);
  }

  std::pair<double, double> brent(double ax, double bx, double cx, double fbx) {
    constexpr double kCGold = 0.3819660112501051;
    constexpr double kTol = 1e-10;
    constexpr double kZeps = 1e-18;
    double a = std::min(ax, cx), b = std::max(ax, cx);
    double x = bx, w = bx, v = bx;
    double fx = fbx, fw = fbx, fv = fbx;
    double d = 0.0, e = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      const double xm = 0.5 * (a + b);
      const double tol1 = kTol * std::abs(x) + kZeps;
      const double tol2 = 2.0 * tol1;
      if (std::abs(x - xm) <= (tol2 - 0.5 * (b - a))) break;
      if (std::abs(e) > tol1) {
        const double r = (x - w) * (fx - fv);
        double q = (x - v) * (fx - fw);
        double p = (x - v) * q - (x - w) * r;
        q = 2.0 * (q - r);
        if (q > 0.0) p = -p;
        q = std::abs(q);
        const double etemp = e;
        e = d;
        if (std::abs(p) >= std::abs(0.5 * q * etemp) || p <= q * (a - x) || p >= q * (b - x)) {
          e = (x >= xm) ? a - x : b - x;
          d = kCGold * e;
        } else {
          d = p / q;
          const double u = x + d;
          if (u - a < tol2 || b - u < tol2) d = std::copysign(tol1, xm - x);
        }
      } else {
        e = (x >= xm) ? a - x : b - x;
        d = kCGold * e;
      }
      const double u = std::abs(d) >= tol1 ? x + d : x + std::copysign(tol1, d);
      const double fu = eval(u);
      if (fu <= fx) {
        if (u >= x) a = x; else b = x;
        v = w; fv = fw;
        w = x; fw = fx;
        x = u; fx = fu;
      } else {
        if (u < x) a = u; else b = u;
        if (fu <= fw || w == x) {
          v = w; fv = fw;
          w = u; fw = fu;
        } else if (fu <= fv || v == x || v == w) {
          v = u; fv = fu;
        }
      }
    }
    return {x, fx};
  }

  const Objective& f_;
  int& evaluations_;
  std::vector<double> x0_, d_, trial_;
};

}  // namespace

OptimizeResult powell(const Objective& f, std::vector<double> x0, const OptimizerOptions& opts) {
  require(opts.ftol > 0.0, ErrorKind::InvalidArgument, "powell: ftol must be positive");
  const std::size_t n = x0.size();
  OptimizeResult res;
  std::vector<double> x = std::move(x0);
  double fx = f(x);
  res.evaluations = 1;
  record(res, opts, {0, fx, 0.0});
  res.x = x;
  res.value = fx;
  if (n == 0) {
    res.converged = true;
    res.status = "converged";
    return res;
  }

  std::vector<std::vector<double>> dirs(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) dirs[i][i] = 1.0;
  LineMinimizer line(f, res.evaluations);

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    const double f_start = fx;
    const std::vector<double> x_start = x;
    double biggest = 0.0;
    std::size_t ibig = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double before = fx;
      fx = line.minimize(x, dirs[i], fx);
      if (before - fx > biggest) {
        biggest = before - fx;
        ibig = i;
      }
    }
    res.iterations = iter;
    if (2.0 * (f_start - fx) <= opts.ftol * (std::abs(f_start) + std::abs(fx)) + 1e-300) {
      record(res, opts, {iter, fx, 0.0});
      res.x = x;
      res.value = fx;
      res.converged = true;
      res.status = "converged";
      return res;
    }
    std::vector<double> xe(n), new_dir(n);
    for (std::size_t i = 0; i < n; ++i) {
      xe[i] = 2.0 * x[i] - x_start[i];
      new_dir[i] = x[i] - x_start[i];
    }
    const double fe = f(xe);
    ++res.evaluations;
    if (fe < f_start) {
      const double t = 2.0 * (f_start - 2.0 * fx + fe) * std::pow(f_start - fx - biggest, 2) -
                       biggest * std::pow(f_start - fe, 2);
      if (t < 0.0) {
        fx = line.minimize(x, new_dir, fx);
        dirs[ibig] = dirs[n - 1];
        dirs[n - 1] = new_dir;
      }
    }
    record(res, opts, {iter, fx, 0.0});
    res.x = x;
    res.value = fx;
  }
  res.status = "iteration limit reached";
  return res;
}

}  // namespace mcvqe::numerics
