#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "kerrcat/special_fn.hpp"

namespace kerrcat {

/// Square uniform midpoint grid over the complex plane.
struct PhaseSpaceGrid {
  cplx center{0.0, 0.0};
  double half_width = 8.0;
  int points_per_axis = 401;

  double spacing() const { return 2.0 * half_width / points_per_axis; }
  double cell_area() const { return spacing() * spacing(); }
  double coord(int i) const { return -half_width + spacing() * (i + 0.5); }
  /// Grid point (i along the real axis, j along the imaginary axis).
  cplx point(int i, int j) const { return center + cplx(coord(i), coord(j)); }
  std::size_t size() const { return std::size_t(points_per_axis) * points_per_axis; }
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int points = 0;
  double spacing = 0.0;
};

/// Worker count: KERRCAT_THREADS if set, otherwise the hardware concurrency.
int default_thread_count();

/// Runs body(begin, end) over a static partition of [0, n). Results written
/// by index are identical for any thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  int threads = 0);

/// Pairwise (tree) summation with a fixed topology.
double pairwise_sum(const double* v, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

/// Samples a function over the grid, row-major with j (imaginary axis) outer.
std::vector<double> sample_grid(const std::function<double(cplx)>& f, const PhaseSpaceGrid& g,
                                int threads = 0);

/// Midpoint sum of pre-sampled values. The error estimate is the difference
/// from the same rule on the every-other-point subgrid (spacing 2h). Use an
/// odd point count: with an even count the two sub-lattices are mirror images
/// and a symmetric integrand gives a zero estimate.
QuadratureResult integrate_samples(const std::vector<double>& samples, const PhaseSpaceGrid& g);

/// Throws UnderResolvedGrid when the error estimate exceeds tol.
QuadratureResult integrate_2d(const std::function<double(cplx)>& f, const PhaseSpaceGrid& g,
                              double tol = std::numeric_limits<double>::infinity(), int threads = 0);

/// Composite Simpson on equally spaced samples y_0..y_n (n a multiple of 4)
/// with spacing h; error estimate |S_h - S_2h| / 15.
QuadratureResult integrate_samples_1d(const std::vector<double>& y, double h);

/// Composite Simpson on [a, b] with n rounded up to a multiple of 4; the error
/// estimate is |S_n - S_{n/2}| / 15.
QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b, int n,
                              double tol = std::numeric_limits<double>::infinity());

}  // namespace kerrcat
