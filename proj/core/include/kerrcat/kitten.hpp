#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kerrcat/model.hpp"
#include "kerrcat/phase_space.hpp"

namespace kerrcat {

/// A p-lobe superposition sum_j f_j a^dag^kappa S(xi_j) D(alpha_j)|0> whose
/// components are the base state rotated by theta_rot + 2 pi j / p.
struct KittenSpec {
  int p = 2;
  std::vector<cplx> f;
  double theta_rot = 0.0;
  ModelParams base;

  /// Rotation angle of component j.
  double angle(int j) const;
  /// Parameters of component j (alpha e^{i angle}, squeezing phase + 2 angle, c = 0).
  ModelParams component(int j) const;
  void validate() const;
};

/// Weights and rotation at which the c = 1 state matches a p-lobe kitten at
/// lambda t = pi / (2p). Throws UnsupportedSelection unless c = 1 and p is even.
KittenSpec kitten_selection(int p, const ModelParams& params);

/// lambda t at which kitten_selection(p, .) is realized.
double kitten_time(int p);

/// sum_n A_n(j) conj(A_n(l)) for two photon-added squeezed coherent
/// components with the same r and kappa, in closed form.
cplx component_overlap(const ModelParams& pj, const ModelParams& pl);

/// Squared norm of sum_j f_j A(j) from the closed overlaps.
double fiducial_norm_squared(const KittenSpec& spec);

/// Normalization constant of the fiducial state from the kappa = 1 closed form.
/// Throws WrongKappa for kappa != 1.
double fiducial_normalization_k1(const KittenSpec& spec);

/// Normalized Fock coefficients of the fiducial state. Throws DegenerateState
/// when the superposition is numerically null.
FockState fiducial_state(const KittenSpec& spec, double eps_trunc = 1e-12);

/// Closed-form Wigner function of the kappa = 1 fiducial state.
double wigner_kitten_k1(const KittenSpec& spec, cplx beta);

/// sqrt(Tr (rho1 - rho2)^2); the smaller matrix is zero-padded.
double hs_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);
/// Same for rank-one operators |a><a| and |b><b| without forming them.
double hs_distance(const FockState& a, const FockState& b);
/// sqrt(pi integral (W1 - W2)^2) on a grid.
QuadratureResult hs_distance_phase_space(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                         const PhaseSpaceGrid& grid, int threads = 0);

struct HsScanRow {
  double lambda_t = 0.0;
  double d_hs = 0.0;
};

inline constexpr int kHsPointsPerPi = 600;

/// d_HS between the Kerr-evolved model state and a fixed reference state at
/// `points` equally spaced lambda t in [t_begin, t_end].
std::vector<HsScanRow> hs_scan(const ModelParams& params, const FockState& reference, double t_begin,
                               double t_end, int points, int threads = 0);

/// Full width of the interval around `center` on which d_HS stays below
/// `threshold`. Throws InvalidArgument if d_HS(center) is not below it.
double collapse_width(const ModelParams& params, const FockState& reference, double center,
                      double threshold = 0.1);

void write_hs_scan_csv(const std::filesystem::path& path, const std::vector<HsScanRow>& rows,
                       const std::vector<std::string>& comments = {});

}  // namespace kerrcat
