#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kerrcat/model.hpp"
#include "kerrcat/phase_space.hpp"

namespace kerrcat {

enum class DampingKind { amplitude, phase };

struct DampingParams {
  double gamma = 0.0;
  DampingKind kind = DampingKind::amplitude;
};

/// Amplitude-damped density matrix at physical time t (jump operator a).
DensityMatrix amp_damped_rho(const DensityMatrix& rho0, const ModelParams& p, const DampingParams& damp,
                             double t);

/// Phase-damped density matrix at physical time t (jump operator a^dag a).
DensityMatrix phase_damped_rho(const DensityMatrix& rho0, const ModelParams& p, const DampingParams& damp,
                               double t);

/// Dispatches on damp.kind.
DensityMatrix damped_rho(const DensityMatrix& rho0, const ModelParams& p, const DampingParams& damp, double t);

/// Superoperators of the master equation, acting on a Fock-basis matrix:
/// S = -i[H, .], J = 2 gamma a . a^dag, L = -gamma {n, .}, R = [n, .].
Eigen::MatrixXcd super_S(const Eigen::MatrixXcd& rho, const ModelParams& p);
Eigen::MatrixXcd super_J(const Eigen::MatrixXcd& rho, double gamma);
Eigen::MatrixXcd super_L(const Eigen::MatrixXcd& rho, double gamma);
Eigen::MatrixXcd super_R(const Eigen::MatrixXcd& rho);

/// Infinite-time limit of phase damping: the populations of the model state.
/// Closed-form Q, W and tomogram of that diagonal state.
class PhaseAsymptote {
 public:
  explicit PhaseAsymptote(const ModelParams& p, double eps_trunc = 1e-12);

  const std::vector<double>& populations() const { return pop_; }
  DensityMatrix density() const;

  double q(cplx beta) const;
  /// Q through the Bessel resummation of the Mehler-type sum.
  double q_bessel(cplx beta) const;
  double w(cplx beta) const;
  double tomogram(double x) const;

 private:
  ModelParams p_;
  std::vector<double> pop_;
  double prefactor_ = 0.0;  // N^2 e^{-|alpha|^2 - Re(alpha^2 nu*)/mu} / mu
};

double asymptotic_q_phase(const ModelParams& p, cplx beta);
double asymptotic_w_phase(const ModelParams& p, cplx beta);
double asymptotic_tomogram_phase(const ModelParams& p, double x);

struct DampedDiagnostics {
  double s_q = 0.0;
  double delta_w = 0.0;
  double q_norm = 0.0;
  double w_norm = 0.0;
  double error_estimate = 0.0;
};

DampedDiagnostics damped_diagnostics(const DensityMatrix& rho_t, const PhaseSpaceGrid& grid, int threads = 0);

struct TimeSeriesRow {
  double lambda_t = 0.0;
  double s_q = 0.0;
  double delta_w = 0.0;
};

void write_time_series_csv(const std::filesystem::path& path, const std::vector<TimeSeriesRow>& rows,
                           const std::vector<std::string>& comments = {});

}  // namespace kerrcat
