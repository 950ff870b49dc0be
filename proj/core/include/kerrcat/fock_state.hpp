#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "kerrcat/model.hpp"

namespace kerrcat {

/// Which square root of nu the coefficient formula uses. The result is the
/// same for both; the choice exists so that tests can demonstrate that.
enum class SqrtBranch { principal, opposite };

/// Unnormalized coefficients <n| a^dag^kappa S(xi) D(alpha) |0> for n = 0..n_max.
std::vector<cplx> coeffs_A(int n_max, const ModelParams& p, SqrtBranch branch = SqrtBranch::principal);

/// Same as a single entry of coeffs_A (zero for n < kappa).
cplx coeff_A(int n, const ModelParams& p, SqrtBranch branch = SqrtBranch::principal);

struct ClosedSums {
  double plus = 0.0;   // sum |A_n|^2
  double minus = 0.0;  // sum (-1)^(n-kappa) |A_n|^2
  double imag_residual = 0.0;
};

ClosedSums closed_sums(const ModelParams& p);

/// Normalization constant of the superposed state; throws DegenerateState
/// when the superposition is numerically null.
double normalization(const ModelParams& p);

inline constexpr double kDefaultEpsTrunc = 1e-12;
inline constexpr int kMaxFockDim = 6000;

FockState build_state(const ModelParams& p, double eps_trunc = kDefaultEpsTrunc);

/// Normalized coefficients up to a fixed n_max (tail_mass_bound = 1 - partial norm).
FockState build_state_to(const ModelParams& p, int n_max);

/// Kerr evolution for a physical time t: c_n -> c_n exp(-i((omega - lambda) n + lambda n^2) t).
FockState evolve(const FockState& s, const ModelParams& p, double t);

/// Same as evolve with t = lambda_t / lambda_kerr.
FockState evolve_lambda_t(const FockState& s, const ModelParams& p, double lambda_t);

DensityMatrix density(const FockState& s);

/// Coefficients of the delta-derivative expansion of the P function:
/// P_nm = (-1)^(n+m) rho_nm / sqrt(n! m!).
Eigen::MatrixXcd p_rep_coeffs(const DensityMatrix& rho);

/// Tail bound used by build_state for the first n_max+1 coefficients of a
/// state whose exact squared norm is `total`.
double truncation_tail_bound(const std::vector<cplx>& coeffs, int n_max, double total, int kappa,
                             double tanh_r);

// Density cache: text header + "n m re im" rows with hexfloat values.

struct DensityCacheHeader {
  int format_version = 1;
  std::map<std::string, std::string> meta;
};

void write_density_cache(const std::filesystem::path& path, const DensityMatrix& rho,
                         const DensityCacheHeader& header);
DensityMatrix read_density_cache(const std::filesystem::path& path, DensityCacheHeader* header = nullptr);

}  // namespace kerrcat
