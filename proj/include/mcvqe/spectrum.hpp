#pragma once

#include <string>
#include <vector>

namespace mcvqe {

struct SpectralLine {
  double energy_ev = 0.0;
  double strength = 0.0;
};

struct SpectrumResult {
  std::string method;
  double delta_ev = 0.0;  ///< Lorentzian half width at half maximum
  std::vector<SpectralLine> lines;
  std::vector<double> grid_ev;
  std::vector<double> intensity;
};

/// I(E) = Σ O (1/π) δ / ((E − ΔE)² + δ²)
std::vector<double> broaden(const std::vector<SpectralLine>& lines, double delta,
                            const std::vector<double>& grid);

/// `points` equally spaced values from emin to emax inclusive.
std::vector<double> linear_grid(double emin, double emax, int points);

SpectrumResult make_spectrum(std::string method, std::vector<SpectralLine> lines, double delta,
                             double emin, double emax, int points);

/// Header `energy_ev,intensity`, values printed with 17 significant digits.
std::string spectrum_csv(const SpectrumResult& s);

}  // namespace mcvqe
