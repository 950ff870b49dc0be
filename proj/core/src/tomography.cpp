#include "kerrcat/tomography.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "kerrcat/errors.hpp"
#include "kerrcat/fock_state.hpp"

namespace kerrcat {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

// Hermite functions psi_n(x) = pi^{-1/4} e^{-x^2/2} H_n(x) / sqrt(2^n n!).
std::vector<double> hermite_functions(double x, int n_max) {
  std::vector<double> psi(static_cast<std::size_t>(n_max) + 1);
  psi[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  if (n_max >= 1) psi[1] = std::sqrt(2.0) * x * psi[0];
  for (int n = 1; n < n_max; ++n)
    psi[n + 1] = std::sqrt(2.0 / (n + 1)) * x * psi[n] - std::sqrt(double(n) / (n + 1)) * psi[n - 1];
  return psi;
}

// Structure function of one branch |xi', alpha'> including e^{-x^2/2} and the
// branch-dependent part of the Gaussian prefactor:
//   (1 + (nu/mu) e^{-2i phi})^{-(kappa+1)/2} exp(...) H_kappa(...)
// times sqrt of exp(-|a|^2 - Re(a^2 nu*)/mu) / (sqrt(pi) mu 2^kappa).
cplx structure(double x, double phi, double mu, cplx nu, cplx a, int kappa) {
  const cplx e2 = std::polar(1.0, -2.0 * phi);
  const cplx den = 1.0 + nu / mu * e2;
  const cplx expo = (nu * x * x - a * a / (2.0 * mu) + std::sqrt(2.0) * a * x * std::polar(1.0, phi)) /
                    (mu * std::polar(1.0, 2.0 * phi) + nu);
  const cplx arg = (x - a / (std::sqrt(2.0) * mu) * std::polar(1.0, -phi)) / std::sqrt(den);
  const double gauss =
      -0.5 * x * x + 0.5 * (-std::norm(a) - (a * a * std::conj(nu)).real() / mu) -
      0.5 * (0.5 * std::log(kPi) + std::log(mu) + kappa * std::log(2.0));
  return std::pow(den, -0.5 * (kappa + 1)) * std::exp(expo + gauss) * hermite(kappa, arg);
}

}  // namespace

double tomogram_series(const DensityMatrix& rho, double x, double phi) {
  const int dim = rho.dim();
  const auto psi = hermite_functions(x, dim - 1);
  Eigen::VectorXcd v(dim);
  for (int n = 0; n < dim; ++n) v[n] = psi[n] * std::polar(1.0, n * phi);
  const double val = (v.adjoint() * rho.elements * v)(0, 0).real();
  return std::max(val, 0.0);
}

double tomogram_series(const FockState& s, double x, double phi) {
  const auto psi = hermite_functions(x, s.n_max());
  cplx acc = 0.0;
  for (int n = 0; n <= s.n_max(); ++n) acc += s.coeffs[n] * psi[n] * std::polar(1.0, -n * phi);
  return std::norm(acc);
}

double tomogram_t0(const ModelParams& p, double x, double phi) {
  const double nrm = normalization(p);
  const double mu = p.mu();
  const cplx nu = p.nu();
  const cplx s = structure(x, phi, mu, nu, p.alpha, p.kappa) + p.c * structure(x, phi, mu, nu, -p.alpha, p.kappa);
  return nrm * nrm * std::norm(s);
}

double tomogram_quarter(const ModelParams& p, double x, double phi) {
  const double nrm = normalization(p);
  const double mu = p.mu();
  const cplx nu = p.nu();
  const cplx a = p.alpha;
  const int k = p.kappa;
  const double Phi = phi + (p.delta() - 1.0 + 2.0 * k) * kPi / 4.0;
  const cplx s = (p.c + 1.0) / 2.0 * (structure(x, Phi, mu, -nu, kI * a, k) + structure(x, Phi, mu, -nu, -kI * a, k)) -
                 (p.c - 1.0) / 2.0 * std::polar(1.0, -kPi / 4.0) *
                     (structure(x, Phi, mu, nu, a, k) - structure(x, Phi, mu, nu, -a, k));
  return nrm * nrm * std::norm(s);
}

double tomogram_eighth(const ModelParams& p, double x, double phi) {
  const double nrm = normalization(p);
  const double mu = p.mu();
  const cplx nu = p.nu();
  const cplx a = p.alpha;
  const int k = p.kappa;
  const double P = phi + (p.delta() - 1.0 + 2.0 * k) * kPi / 8.0;
  const double q = kPi / 4.0;
  const cplx one_m_i{1.0, -1.0};
  const cplx one_p_i{1.0, 1.0};
  const cplx even = one_m_i * (structure(x, P, mu, nu, a, k) + structure(x, P, mu, nu, -a, k)) +
                    one_p_i * (structure(x, P, mu, -nu, kI * a, k) + structure(x, P, mu, -nu, -kI * a, k));
  const cplx odd = one_m_i * (structure(x, P + q, mu, nu, -a, k) - structure(x, P + q, mu, nu, a, k)) +
                   one_m_i * (structure(x, P - q, mu, nu, -a, k) - structure(x, P - q, mu, nu, a, k));
  const cplx s = (p.c + 1.0) / 4.0 * even + (p.c - 1.0) / 4.0 * std::polar(1.0, kPi / 8.0) * odd;
  return nrm * nrm * std::norm(s);
}

std::vector<double> default_x_grid(const ModelParams& p, int points) {
  if (points < 5) throw InvalidArgument("x grid needs at least 5 points");
  // The anti-squeezed quadrature reaches sqrt(2)|alpha|e^r; each added photon widens it further.
  const double er = std::exp(p.r);
  const double xmax = std::sqrt(2.0) * std::abs(p.alpha) * er + 6.0 * std::max(1.0, er / std::sqrt(2.0)) +
                      std::sqrt(2.0 * p.kappa) * er;
  std::vector<double> x(points);
  for (int i = 0; i < points; ++i) x[i] = -xmax + 2.0 * xmax * i / (points - 1);
  return x;
}

std::vector<double> uniform_phi_grid(int points) {
  if (points < 1) throw InvalidArgument("phi grid needs at least 1 point");
  std::vector<double> phi(points);
  for (int i = 0; i < points; ++i) phi[i] = 2.0 * kPi * i / points;
  return phi;
}

QuadratureResult tomogram_marginal(const Tomogram& t, std::size_t iphi) {
  const std::size_t nx = t.x_grid.size();
  std::vector<double> y(t.values.begin() + iphi * nx, t.values.begin() + (iphi + 1) * nx);
  return integrate_samples_1d(y, t.x_grid[1] - t.x_grid[0]);
}

void write_tomogram_csv(const std::filesystem::path& path, const Tomogram& t,
                        const std::vector<std::string>& comments) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "x, phi, omega\n";
  char buf[128];
  for (std::size_t k = 0; k < t.phi_grid.size(); ++k)
    for (std::size_t i = 0; i < t.x_grid.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.10g, %.10g, %.17g\n", t.x_grid[i], t.phi_grid[k], t.at(i, k));
      out << buf;
    }
}

}  // namespace kerrcat
