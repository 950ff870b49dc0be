#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "kerrcat/model.hpp"
#include "kerrcat/quad_engine.hpp"

namespace kerrcat {

enum class FieldKind { wigner, husimi, r_sigma };

/// Evaluates the s-ordered quasiprobability R_sigma(beta) of a density
/// matrix; sigma = 1/2 gives the Wigner function and sigma = 1 the Husimi
/// function. Construction prepares the non-zero diagonals of rho once so
/// repeated point evaluation is cheap; instances are immutable and can be
/// shared across threads.
class QuasiDistribution {
 public:
  QuasiDistribution(const DensityMatrix& rho, double sigma);

  static QuasiDistribution wigner(const DensityMatrix& rho) { return {rho, 0.5}; }
  static QuasiDistribution husimi(const DensityMatrix& rho) { return {rho, 1.0}; }

  double operator()(cplx beta) const;
  double sigma() const { return sigma_; }
  FieldKind kind() const;

 private:
  struct Diagonal {
    int d = 0;
    std::vector<double> re;  // rho(m + d, m)
    std::vector<double> im;
    std::vector<double> a;  // 1 / sqrt((m+1)(m+d+1))
    std::vector<double> b;  // sqrt(m(m+d)) / sqrt((m+1)(m+d+1))
    double log_norm = 0.0;  // -lgamma(d+1)/2
  };
  double sigma_;
  double q_;
  std::vector<Diagonal> diags_;
};

/// Husimi function of a pure state by the O(N) overlap sum.
class PureHusimi {
 public:
  explicit PureHusimi(const FockState& psi);
  double operator()(cplx beta) const;

 private:
  std::vector<cplx> c_;
};

double wigner_point(const DensityMatrix& rho, cplx beta);
double husimi_point(const DensityMatrix& rho, cplx beta);
/// Throws SigmaOutOfRange unless 0 < sigma <= 1.
double r_point(const DensityMatrix& rho, cplx beta, double sigma);

/// Angular marginal of the Husimi function.
double polar_q(const DensityMatrix& rho, double theta);

/// Default half-width |alpha| e^r + 5 max(1, e^r / sqrt 2), centred at 0.
PhaseSpaceGrid default_grid(const ModelParams& p, int points_per_axis = 401);
inline constexpr int kDefaultGridPoints = 401;
inline constexpr int kFineGridPoints = 801;

struct PhaseSpaceField {
  PhaseSpaceGrid grid;
  std::vector<double> values;
  FieldKind kind = FieldKind::wigner;
  double sigma = 0.5;

  double max_abs() const;
  /// max |value| on the outermost ring of grid points divided by max |value|.
  double boundary_ratio() const;
  QuadratureResult integral() const;
};

template <class F>
PhaseSpaceField evaluate_field(const F& f, const PhaseSpaceGrid& grid, FieldKind kind, double sigma,
                               int threads = 0) {
  PhaseSpaceField out;
  out.grid = grid;
  out.kind = kind;
  out.sigma = sigma;
  out.values = sample_grid([&f](cplx b) { return f(b); }, grid, threads);
  return out;
}

PhaseSpaceField evaluate_field(const QuasiDistribution& dist, const PhaseSpaceGrid& grid, int threads = 0);

inline constexpr double kBoundaryRatio = 1e-8;

/// Throws UnderResolvedGrid if the field does not decay to kBoundaryRatio
/// of its maximum on the grid boundary.
void require_boundary_decay(const PhaseSpaceField& field);

/// The grid enlarged at fixed spacing by about 15% of its half-width per side.
PhaseSpaceGrid widened(const PhaseSpaceGrid& g);

/// evaluate_field, repeated on widened grids until the boundary ring has
/// decayed below kBoundaryRatio; gives up after max_widen enlargements and
/// returns the last field (require_boundary_decay then reports it).
template <class F>
PhaseSpaceField evaluate_decayed(const F& f, PhaseSpaceGrid grid, FieldKind kind, double sigma, int threads = 0,
                                 int max_widen = 8) {
  auto field = evaluate_field(f, grid, kind, sigma, threads);
  for (int i = 0; i < max_widen && !(field.boundary_ratio() < kBoundaryRatio); ++i) {
    grid = widened(grid);
    field = evaluate_field(f, grid, kind, sigma, threads);
  }
  return field;
}

PhaseSpaceField evaluate_decayed(const QuasiDistribution& dist, const PhaseSpaceGrid& grid, int threads = 0,
                                 int max_widen = 8);

/// -integral Q log Q with 0 log 0 = 0.
QuadratureResult wehrl_entropy(const PhaseSpaceField& q_field);
/// integral |W| - 1.
QuadratureResult negativity_w(const PhaseSpaceField& w_field);
/// integral |R_sigma| - 1 on the given grid.
QuadratureResult negativity_r(const DensityMatrix& rho, double sigma, const PhaseSpaceGrid& grid,
                              int threads = 0);

/// Smallest sigma for which R_sigma of a state with Fock weights decaying as
/// tanh(r)^n is summable; below it negativity_r is meaningless.
double sigma_convergence_floor(double r);

/// Fock dimension needed so that the truncated R_sigma sum of the model
/// state has a weighted tail below eps (same as the plain truncation for
/// sigma >= 1/2).
int sigma_truncation(const ModelParams& p, double sigma, double eps = 1e-12);

enum class KittenTime { t0, quarter, eighth };

/// Closed-form R_sigma of the model state at lambda t in {0, pi/4, pi/8}.
/// Throws DivergentSeries below sigma_convergence_floor, and also when the
/// alternating l-sum cancels by more than 1e10 (small sigma far in the tail),
/// where no fixed-precision evaluation holds the relative accuracy.
double r_closed(const ModelParams& p, cplx beta, double sigma, KittenTime when);

/// CSV with header "re_beta, im_beta, value"; extra lines are written first
/// as '#' comments.
void write_field_csv(const std::filesystem::path& path, const PhaseSpaceField& field,
                     const std::vector<std::string>& comments = {});

}  // namespace kerrcat
