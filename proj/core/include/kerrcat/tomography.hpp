#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kerrcat/model.hpp"
#include "kerrcat/quad_engine.hpp"

namespace kerrcat {

/// Rotated-quadrature probability densities on an (X, phi) lattice;
/// values are stored phi-major: values[iphi * x_grid.size() + ix].
struct Tomogram {
  std::vector<double> x_grid;
  std::vector<double> phi_grid;
  std::vector<double> values;

  double at(std::size_t ix, std::size_t iphi) const { return values[iphi * x_grid.size() + ix]; }
};

/// Homodyne density from a density matrix (any rank).
double tomogram_series(const DensityMatrix& rho, double x, double phi);
/// Pure-state shortcut |sum_n c_n psi_n(x) e^{-i n phi}|^2.
double tomogram_series(const FockState& psi, double x, double phi);

/// Closed forms for the model state at lambda t = 0, pi/4 and pi/8.
double tomogram_t0(const ModelParams& p, double x, double phi);
double tomogram_quarter(const ModelParams& p, double x, double phi);
double tomogram_eighth(const ModelParams& p, double x, double phi);

/// Uniform X grid on [-X_max, X_max] with X_max = sqrt(2)|alpha| cosh r + 6 max(1, e^r/sqrt 2).
std::vector<double> default_x_grid(const ModelParams& p, int points = 801);
std::vector<double> uniform_phi_grid(int points);

template <class F>
Tomogram tomogram_surface(const F& omega, std::vector<double> x_grid, std::vector<double> phi_grid,
                          int threads = 0) {
  Tomogram t;
  t.x_grid = std::move(x_grid);
  t.phi_grid = std::move(phi_grid);
  const std::size_t nx = t.x_grid.size();
  t.values.assign(nx * t.phi_grid.size(), 0.0);
  parallel_for(
      t.phi_grid.size(),
      [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k)
          for (std::size_t i = 0; i < nx; ++i) t.values[k * nx + i] = omega(t.x_grid[i], t.phi_grid[k]);
      },
      threads);
  return t;
}

/// Simpson integral over X of the slice at phi_grid[iphi].
QuadratureResult tomogram_marginal(const Tomogram& t, std::size_t iphi);

void write_tomogram_csv(const std::filesystem::path& path, const Tomogram& t,
                        const std::vector<std::string>& comments = {});

}  // namespace kerrcat
