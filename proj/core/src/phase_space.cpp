#include "kerrcat/phase_space.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "kerrcat/errors.hpp"
#include "kerrcat/fock_state.hpp"

namespace kerrcat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBig = 1e200;
const double kLogBig = std::log(kBig);

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || sigma > 1.0 || !std::isfinite(sigma))
    throw SigmaOutOfRange("sigma must lie in (0, 1], got " + std::to_string(sigma));
}

}  // namespace

QuasiDistribution::QuasiDistribution(const DensityMatrix& rho, double sigma)
    : sigma_(sigma), q_((1.0 - sigma) / sigma) {
  check_sigma(sigma);
  const int dim = rho.dim();
  double scale = 0.0;
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m) scale = std::max(scale, std::abs(rho(n, m)));
  // Entries this far below the largest one contribute nothing at q <= 1,
  // where every Fock kernel is bounded by 1/(pi sigma).
  const double floor = q_ <= 1.0 ? 1e-20 * scale : 0.0;

  for (int d = 0; d < dim; ++d) {
    int len = dim - d;
    while (len > 0 && std::abs(rho(len - 1 + d, len - 1)) <= floor) --len;
    if (len == 0) continue;
    Diagonal g;
    g.d = d;
    g.log_norm = -0.5 * log_factorial(d);
    g.re.resize(len);
    g.im.resize(len);
    g.a.resize(len);
    g.b.resize(len);
    for (int m = 0; m < len; ++m) {
      const cplx v = rho(m + d, m);
      g.re[m] = v.real();
      g.im[m] = v.imag();
      const double den = std::sqrt((m + 1.0) * (m + d + 1.0));
      g.a[m] = 1.0 / den;
      g.b[m] = std::sqrt(double(m) * (m + d)) / den;
    }
    diags_.push_back(std::move(g));
  }
}

FieldKind QuasiDistribution::kind() const {
  if (sigma_ == 0.5) return FieldKind::wigner;
  if (sigma_ == 1.0) return FieldKind::husimi;
  return FieldKind::r_sigma;
}

// R = (1/(pi s)) e^{-|b|^2/s} [row_0 + 2 Re sum_d (b*/s)^d row_d], with
// row_d = sum_m u_m rho(m+d, m) and u_m = (-q)^m sqrt(m!/(m+d)!) L_m^(d)(|b|^2/(s(1-s)))
// run as a three-term recurrence in m.
double QuasiDistribution::operator()(cplx beta) const {
  const double s = std::norm(beta);
  const double ab = std::sqrt(s);
  const double y2 = s / (sigma_ * sigma_);
  const double q = q_;
  const double q2 = q * q;
  const double log_base = -s / sigma_ - std::log(kPi * sigma_);
  const double log_ratio = ab > 0.0 ? std::log(ab / sigma_) : 0.0;
  const double theta = std::arg(beta);
  double total = 0.0;

  for (const auto& g : diags_) {
    if (g.d > 0 && ab == 0.0) break;
    const int len = static_cast<int>(g.re.size());
    const double d = g.d;
    double u = 1.0;
    double u_prev = 0.0;
    double scale = 0.0;
    double acc_re = 0.0;
    double acc_im = 0.0;
    for (int m = 0; m < len; ++m) {
      acc_re += u * g.re[m];
      acc_im += u * g.im[m];
      const double next = (y2 - q * (2.0 * m + d + 1.0)) * g.a[m] * u - q2 * g.b[m] * u_prev;
      u_prev = u;
      u = next;
      if (std::abs(u) > kBig) {
        u /= kBig;
        u_prev /= kBig;
        acc_re /= kBig;
        acc_im /= kBig;
        scale += kLogBig;
      }
    }
    const double log_mag = log_base + scale + g.log_norm + d * log_ratio;
    if (g.d == 0) {
      total += std::exp(log_mag) * acc_re;
    } else {
      const double ph = d * theta;
      total += 2.0 * std::exp(log_mag) * (acc_re * std::cos(ph) + acc_im * std::sin(ph));
    }
  }
  return total;
}

PureHusimi::PureHusimi(const FockState& psi) : c_(psi.coeffs) {}

double PureHusimi::operator()(cplx beta) const {
  const cplx bc = std::conj(beta);
  cplx t = 1.0;
  cplx sum = 0.0;
  double log_scale = -0.5 * std::norm(beta);
  for (std::size_t n = 0; n < c_.size(); ++n) {
    sum += c_[n] * t;
    t *= bc / std::sqrt(double(n + 1));
    if (std::abs(t) > kBig) {
      t /= kBig;
      sum /= kBig;
      log_scale += kLogBig;
    }
  }
  return std::exp(2.0 * log_scale) * std::norm(sum) / kPi;
}

double wigner_point(const DensityMatrix& rho, cplx beta) { return QuasiDistribution::wigner(rho)(beta); }

double husimi_point(const DensityMatrix& rho, cplx beta) { return QuasiDistribution::husimi(rho)(beta); }

double r_point(const DensityMatrix& rho, cplx beta, double sigma) {
  return QuasiDistribution(rho, sigma)(beta);
}

double polar_q(const DensityMatrix& rho, double theta) {
  const int dim = rho.dim();
  double total = 0.0;
  for (int d = 0; d < dim; ++d) {
    cplx acc = 0.0;
    for (int m = 0; m + d < dim; ++m) {
      const int n = m + d;
      const double g =
          std::exp(std::lgamma(0.5 * (n + m) + 1.0) - 0.5 * (log_factorial(n) + log_factorial(m)));
      acc += g * rho(n, m);
    }
    if (d == 0)
      total += acc.real();
    else
      total += 2.0 * (std::polar(1.0, -d * theta) * acc).real();
  }
  return total / (2.0 * kPi);
}

PhaseSpaceGrid default_grid(const ModelParams& p, int points_per_axis) {
  const double er = std::exp(p.r);
  PhaseSpaceGrid g;
  g.center = 0.0;
  g.half_width = std::abs(p.alpha) * er + 5.0 * std::max(1.0, er / std::sqrt(2.0));
  g.points_per_axis = points_per_axis;
  return g;
}

double PhaseSpaceField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double PhaseSpaceField::boundary_ratio() const {
  const int P = grid.points_per_axis;
  double ring = 0.0;
  auto at = [&](int i, int j) { return std::abs(values[std::size_t(j) * P + i]); };
  for (int k = 0; k < P; ++k)
    ring = std::max({ring, at(k, 0), at(k, P - 1), at(0, k), at(P - 1, k)});
  const double peak = max_abs();
  return peak > 0.0 ? ring / peak : 0.0;
}

QuadratureResult PhaseSpaceField::integral() const { return integrate_samples(values, grid); }

PhaseSpaceField evaluate_field(const QuasiDistribution& dist, const PhaseSpaceGrid& grid, int threads) {
  return evaluate_field(dist, grid, dist.kind(), dist.sigma(), threads);
}

PhaseSpaceGrid widened(const PhaseSpaceGrid& g) {
  const double h = g.spacing();
  const int extra = std::max(1, static_cast<int>(std::ceil(0.15 * g.points_per_axis / 2.0)));
  PhaseSpaceGrid out = g;
  out.points_per_axis = g.points_per_axis + 2 * extra;
  out.half_width = 0.5 * h * out.points_per_axis;
  return out;
}

PhaseSpaceField evaluate_decayed(const QuasiDistribution& dist, const PhaseSpaceGrid& grid, int threads,
                                 int max_widen) {
  return evaluate_decayed(dist, grid, dist.kind(), dist.sigma(), threads, max_widen);
}

void require_boundary_decay(const PhaseSpaceField& field) {
  const double ratio = field.boundary_ratio();
  if (!(ratio < kBoundaryRatio))
  {
    char buf[160];
    std::snprintf(buf, sizeof buf, "field on the grid boundary is %.3g of its maximum (limit %.0e); enlarge half_width",
                  ratio, kBoundaryRatio);
    throw UnderResolvedGrid(buf);
  }
}

QuadratureResult wehrl_entropy(const PhaseSpaceField& q_field) {
  if (q_field.kind != FieldKind::husimi) throw InvalidArgument("wehrl_entropy needs a Husimi field");
  require_boundary_decay(q_field);
  std::vector<double> f(q_field.values.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double q = q_field.values[i];
    f[i] = q > 0.0 ? -q * std::log(q) : 0.0;
  }
  return integrate_samples(f, q_field.grid);
}

QuadratureResult negativity_w(const PhaseSpaceField& w_field) {
  if (w_field.kind != FieldKind::wigner) throw InvalidArgument("negativity_w needs a Wigner field");
  require_boundary_decay(w_field);
  std::vector<double> f(w_field.values.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::abs(w_field.values[i]);
  auto r = integrate_samples(f, w_field.grid);
  r.value -= 1.0;
  return r;
}

QuadratureResult negativity_r(const DensityMatrix& rho, double sigma, const PhaseSpaceGrid& grid,
                              int threads) {
  QuasiDistribution dist(rho, sigma);
  const auto field = evaluate_field(dist, grid, threads);
  require_boundary_decay(field);
  std::vector<double> f(field.values.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::abs(field.values[i]);
  auto r = integrate_samples(f, grid);
  r.value -= 1.0;
  return r;
}

double sigma_convergence_floor(double r) {
  const double t = std::tanh(r);
  return t / (1.0 + t);
}

int sigma_truncation(const ModelParams& p, double sigma, double eps) {
  check_sigma(sigma);
  const int plain = build_state(p).n_max();
  if (sigma >= 0.5) return plain;
  const double q = (1.0 - sigma) / sigma;
  const double ratio = q * std::tanh(p.r);
  if (ratio >= 1.0)
    throw DivergentSeries("R_sigma does not exist for sigma <= " +
                          std::to_string(sigma_convergence_floor(p.r)) + " at r = " +
                          std::to_string(p.r));
  const double norm = normalization(p);
  int n_try = std::max(2 * plain, 128);
  while (true) {
    const auto A = coeffs_A(n_try, p);
    std::vector<cplx> w(A.size());
    for (int n = 0; n <= n_try; ++n) {
      const double sign = ((n - p.kappa) & 1) ? -1.0 : 1.0;
      w[n] = std::sqrt(std::pow(q, n)) * norm * (1.0 + sign * p.c) * A[n];
    }
    for (int n = plain; n <= n_try - 10; ++n) {
      if (truncation_tail_bound(w, n, 0.0, p.kappa, ratio) < eps) return n;
    }
    if (n_try >= kMaxFockDim) throw DivergentSeries("R_sigma truncation did not converge");
    n_try = std::min(2 * n_try, kMaxFockDim);
  }
}

void write_field_csv(const std::filesystem::path& path, const PhaseSpaceField& field,
                     const std::vector<std::string>& comments) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "re_beta, im_beta, value\n";
  const int P = field.grid.points_per_axis;
  char buf[128];
  for (int j = 0; j < P; ++j)
    for (int i = 0; i < P; ++i) {
      const cplx b = field.grid.point(i, j);
      std::snprintf(buf, sizeof buf, "%.10g, %.10g, %.17g\n", b.real(), b.imag(),
                    field.values[std::size_t(j) * P + i]);
      out << buf;
    }
}

}  // namespace kerrcat
