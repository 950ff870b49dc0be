#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "kerrcat/special_fn.hpp"

namespace kerrcat {

/// Physical parameters of the Kerr-cat model. Time is measured so that the
/// dimensionless evolution parameter is lambda_kerr * t.
struct ModelParams {
  cplx alpha{2.0, 0.0};
  double r = 0.5;         // squeezing magnitude
  double theta_sq = 0.0;  // squeezing phase
  cplx c{1.0, 0.0};       // weight of the |xi, -alpha> branch
  int kappa = 1;          // photons added
  double omega = 1.0;
  double lambda_kerr = 1.0;

  double mu() const { return std::cosh(r); }
  cplx nu() const { return std::polar(std::sinh(r), theta_sq); }
  double delta() const { return omega / lambda_kerr; }

  /// Throws InvalidArgument on non-finite or out-of-domain fields.
  void validate() const;
  std::string describe() const;
};

struct FockState {
  std::vector<cplx> coeffs;
  double tail_mass_bound = 0.0;

  int n_max() const { return static_cast<int>(coeffs.size()) - 1; }
  double norm_squared() const;
};

struct DensityMatrix {
  Eigen::MatrixXcd elements;

  DensityMatrix() = default;
  explicit DensityMatrix(Eigen::MatrixXcd m) : elements(std::move(m)) {}

  int n_max() const { return static_cast<int>(elements.rows()) - 1; }
  int dim() const { return static_cast<int>(elements.rows()); }
  cplx operator()(int n, int m) const { return elements(n, m); }

  cplx trace() const { return elements.trace(); }
  double hermiticity_error() const;
  double purity() const;
  /// Smallest eigenvalue of the Hermitian part.
  double min_eigenvalue() const;
  /// Copy zero-padded (or cropped) to the given dimension.
  DensityMatrix resized(int dim) const;
};

}  // namespace kerrcat
