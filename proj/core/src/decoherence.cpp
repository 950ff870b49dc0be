#include "kerrcat/decoherence.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "kerrcat/errors.hpp"
#include "kerrcat/fock_state.hpp"

namespace kerrcat {

namespace {

constexpr double kPi = std::numbers::pi;

void check_time(const DampingParams& d, double t) {
  if (!(d.gamma >= 0.0) || !std::isfinite(d.gamma)) throw InvalidArgument("gamma must be >= 0");
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("damped evolution needs t >= 0");
}

// Unitary phase of element (n, m): exp(-i omega (n-m) t - i lambda (n-m)(n+m-1) t).
cplx kerr_phase(const ModelParams& p, int n, int m, double t) {
  const double d = n - m;
  return std::polar(1.0, -(p.omega * d * t + p.lambda_kerr * d * (n + m - 1.0) * t));
}

// (1 - exp(-2 k t)) / k, with the k -> 0 limit taken by series.
cplx damping_ratio(cplx k, double t) {
  const cplx x = 2.0 * k * t;
  if (std::abs(x) < 1e-3) {
    // (1 - e^{-x}) / x = 1 - x/2 + x^2/6 - x^3/24 + x^4/120
    const cplx s = 1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0 + x * x * x * x / 120.0;
    return 2.0 * t * s;
  }
  return (1.0 - std::exp(-x)) / k;
}

}  // namespace

DensityMatrix amp_damped_rho(const DensityMatrix& rho0, const ModelParams& p, const DampingParams& damp,
                             double t) {
  check_time(damp, t);
  const int dim = rho0.dim();
  const double g = damp.gamma;
  Eigen::MatrixXcd out(dim, dim);
  parallel_for(static_cast<std::size_t>(dim), [&](std::size_t nb, std::size_t ne) {
    for (int n = static_cast<int>(nb); n < static_cast<int>(ne); ++n) {
      for (int m = 0; m < dim; ++m) {
        const cplx k(g, p.lambda_kerr * (n - m));
        const cplx F = g * damping_ratio(k, t);
        cplx coef = 1.0;
        cplx acc = rho0(n, m);
        const int lmax = dim - 1 - std::max(n, m);
        for (int l = 1; l <= lmax; ++l) {
          coef *= F * std::sqrt(double(n + l) * double(m + l)) / double(l);
          if (coef == 0.0) break;
          acc += coef * rho0(n + l, m + l);
        }
        out(n, m) = kerr_phase(p, n, m, t) * std::exp(-g * (n + m) * t) * acc;
      }
    }
  });
  return DensityMatrix(std::move(out));
}

DensityMatrix phase_damped_rho(const DensityMatrix& rho0, const ModelParams& p, const DampingParams& damp,
                               double t) {
  check_time(damp, t);
  const int dim = rho0.dim();
  Eigen::MatrixXcd out(dim, dim);
  for (int n = 0; n < dim; ++n)
    for (int m = 0; m < dim; ++m) {
      const double d = n - m;
      out(n, m) = rho0(n, m) * kerr_phase(p, n, m, t) * std::exp(-damp.gamma * d * d * t);
    }
  return DensityMatrix(std::move(out));
}

DensityMatrix damped_rho(const DensityMatrix& rho0, const ModelParams& p, const DampingParams& damp, double t) {
  return damp.kind == DampingKind::amplitude ? amp_damped_rho(rho0, p, damp, t)
                                             : phase_damped_rho(rho0, p, damp, t);
}

Eigen::MatrixXcd super_S(const Eigen::MatrixXcd& rho, const ModelParams& p) {
  Eigen::MatrixXcd out(rho.rows(), rho.cols());
  auto energy = [&](int n) { return p.omega * n + p.lambda_kerr * n * (n - 1.0); };
  for (int n = 0; n < rho.rows(); ++n)
    for (int m = 0; m < rho.cols(); ++m) out(n, m) = cplx(0.0, -(energy(n) - energy(m))) * rho(n, m);
  return out;
}

Eigen::MatrixXcd super_J(const Eigen::MatrixXcd& rho, double gamma) {
  const int d = static_cast<int>(rho.rows());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 0; n + 1 < d; ++n)
    for (int m = 0; m + 1 < d; ++m)
      out(n, m) = 2.0 * gamma * std::sqrt((n + 1.0) * (m + 1.0)) * rho(n + 1, m + 1);
  return out;
}

Eigen::MatrixXcd super_L(const Eigen::MatrixXcd& rho, double gamma) {
  Eigen::MatrixXcd out(rho.rows(), rho.cols());
  for (int n = 0; n < rho.rows(); ++n)
    for (int m = 0; m < rho.cols(); ++m) out(n, m) = -gamma * double(n + m) * rho(n, m);
  return out;
}

Eigen::MatrixXcd super_R(const Eigen::MatrixXcd& rho) {
  Eigen::MatrixXcd out(rho.rows(), rho.cols());
  for (int n = 0; n < rho.rows(); ++n)
    for (int m = 0; m < rho.cols(); ++m) out(n, m) = double(n - m) * rho(n, m);
  return out;
}

PhaseAsymptote::PhaseAsymptote(const ModelParams& p, double eps_trunc) : p_(p) {
  const auto psi = build_state(p, eps_trunc);
  pop_.resize(psi.coeffs.size());
  for (std::size_t n = 0; n < pop_.size(); ++n) pop_[n] = std::norm(psi.coeffs[n]);
  const double nrm = normalization(p);
  const cplx a = p.alpha;
  prefactor_ = nrm * nrm / p.mu() * std::exp(-std::norm(a) - (a * a * std::conj(p.nu())).real() / p.mu());
}

DensityMatrix PhaseAsymptote::density() const {
  const int d = static_cast<int>(pop_.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 0; n < d; ++n) m(n, n) = pop_[n];
  return DensityMatrix(std::move(m));
}

double PhaseAsymptote::q(cplx beta) const {
  const double s = std::norm(beta);
  const double ls = s > 0.0 ? std::log(s) : 0.0;
  double acc = 0.0;
  for (std::size_t n = 0; n < pop_.size(); ++n) {
    if (pop_[n] == 0.0) continue;
    if (s == 0.0) {
      if (n == 0) acc += pop_[0];
      continue;
    }
    acc += pop_[n] * std::exp(-s + n * ls - log_factorial(static_cast<int>(n)));
  }
  return acc / kPi;
}

// Q = pref/pi e^{-s} s^kappa [(1+|c|^2) M(t) + 2 Re(c) M(-t)], M(t) = sum t^n |H_n(z)|^2 / n!^2,
// with t = |nu| s / (2 mu) and z = -i alpha / sqrt(2 mu nu).
double PhaseAsymptote::q_bessel(cplx beta) const {
  if (p_.r < 1e-8) return q(beta);
  const double mu = p_.mu();
  const cplx nu = p_.nu();
  const double s = std::norm(beta);
  const cplx z = cplx(0.0, -1.0) * p_.alpha / (std::sqrt(2.0 * mu) * std::sqrt(nu));
  const double t = std::abs(nu) * s / (2.0 * mu);
  const double c2 = std::norm(p_.c);
  const cplx mp = mehler_bessel_sum(t, z, std::conj(z));
  const cplx mm = p_.c.real() != 0.0 ? mehler_bessel_sum(-t, z, std::conj(z)) : cplx(0.0);
  const double bracket = ((1.0 + c2) * mp + 2.0 * p_.c.real() * mm).real();
  return prefactor_ / kPi * std::exp(-s) * std::pow(s, p_.kappa) * bracket;
}

double PhaseAsymptote::w(cplx beta) const {
  // e^{-x/2} L_n(x) at x = 4|beta|^2 stays bounded by 1 along the recurrence.
  const double x = 4.0 * std::norm(beta);
  double l0 = std::exp(-0.5 * x);
  double l1 = (1.0 - x) * l0;
  double acc = pop_[0] * l0;
  if (pop_.size() > 1) acc -= pop_[1] * l1;
  for (std::size_t n = 1; n + 1 < pop_.size(); ++n) {
    const double l2 = ((2.0 * n + 1.0 - x) * l1 - double(n) * l0) / double(n + 1);
    l0 = l1;
    l1 = l2;
    acc += ((n + 1) & 1 ? -1.0 : 1.0) * pop_[n + 1] * l1;
  }
  return 2.0 / kPi * acc;
}

double PhaseAsymptote::tomogram(double x) const {
  double psi0 = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  double psi1 = std::sqrt(2.0) * x * psi0;
  double acc = pop_[0] * psi0 * psi0;
  if (pop_.size() > 1) acc += pop_[1] * psi1 * psi1;
  for (std::size_t n = 1; n + 1 < pop_.size(); ++n) {
    const double psi2 = std::sqrt(2.0 / (n + 1)) * x * psi1 - std::sqrt(double(n) / (n + 1)) * psi0;
    psi0 = psi1;
    psi1 = psi2;
    acc += pop_[n + 1] * psi1 * psi1;
  }
  return acc;
}

double asymptotic_q_phase(const ModelParams& p, cplx beta) { return PhaseAsymptote(p).q(beta); }
double asymptotic_w_phase(const ModelParams& p, cplx beta) { return PhaseAsymptote(p).w(beta); }
double asymptotic_tomogram_phase(const ModelParams& p, double x) { return PhaseAsymptote(p).tomogram(x); }

DampedDiagnostics damped_diagnostics(const DensityMatrix& rho_t, const PhaseSpaceGrid& grid, int threads) {
  const auto qf = evaluate_decayed(QuasiDistribution::husimi(rho_t), grid, threads);
  const auto wf = evaluate_decayed(QuasiDistribution::wigner(rho_t), grid, threads);
  DampedDiagnostics d;
  const auto s = wehrl_entropy(qf);
  const auto n = negativity_w(wf);
  d.s_q = s.value;
  d.delta_w = n.value;
  d.q_norm = qf.integral().value;
  d.w_norm = wf.integral().value;
  d.error_estimate = std::max(s.error_estimate, n.error_estimate);
  return d;
}

void write_time_series_csv(const std::filesystem::path& path, const std::vector<TimeSeriesRow>& rows,
                           const std::vector<std::string>& comments) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "lambda_t, s_q, delta_w\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.10g, %.17g, %.17g\n", r.lambda_t, r.s_q, r.delta_w);
    out << buf;
  }
}

}  // namespace kerrcat
