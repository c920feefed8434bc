#include "mcvqe/spectrum.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "mcvqe/error.hpp"

namespace mcvqe {

std::vector<double> broaden(const std::vector<SpectralLine>& lines, double delta,
                            const std::vector<double>& grid) {
  require(delta > 0.0, ErrorKind::InvalidArgument, "broaden: width must be positive");
  std::vector<double> out(grid.size(), 0.0);
  const double norm = delta / std::numbers::pi;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double s = 0.0;
    for (const auto& l : lines) {
      const double x = grid[i] - l.energy_ev;
      s += l.strength * norm / (x * x + delta * delta);
    }
    out[i] = s;
  }
  return out;
}

std::vector<double> linear_grid(double emin, double emax, int points) {
  require(points >= 2, ErrorKind::InvalidArgument, "grid: need at least 2 points");
  require(std::isfinite(emin) && std::isfinite(emax) && emax > emin, ErrorKind::InvalidArgument,
          "grid: emax must exceed emin");
  std::vector<double> g(points);
  const double h = (emax - emin) / (points - 1);
  for (int i = 0; i < points; ++i) g[i] = emin + h * i;
  g.back() = emax;
  return g;
}

SpectrumResult make_spectrum(std::string method, std::vector<SpectralLine> lines, double delta,
                             double emin, double emax, int points) {
  for (const auto& l : lines)
    require(l.strength >= 0.0, ErrorKind::InvalidArgument, "spectrum: negative oscillator strength");
  SpectrumResult s;
  s.method = std::move(method);
  s.delta_ev = delta;
  s.grid_ev = linear_grid(emin, emax, points);
  s.intensity = broaden(lines, delta, s.grid_ev);
  s.lines = std::move(lines);
  return s;
}

std::string spectrum_csv(const SpectrumResult& s) {
  std::string out = "energy_ev,intensity\n";
  char buf[64];
  for (std::size_t i = 0; i < s.grid_ev.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", s.grid_ev[i], s.intensity[i]);
    out += buf;
  }
  return out;
}

}  // namespace mcvqe
