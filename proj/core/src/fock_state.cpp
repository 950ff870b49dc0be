#include "kerrcat/fock_state.hpp"

#include <cmath>
#include <limits>

#include "kerrcat/errors.hpp"

namespace kerrcat {

namespace {

constexpr double kCoherentLimitR = 1e-8;
constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

// Laguerre L_n(x) by the three-term recurrence.
double laguerre(int n, double x) {
  double l0 = 1.0;
  if (n == 0) return l0;
  double l1 = 1.0 - x;
  for (int k = 1; k < n; ++k) {
    const double l2 = ((2.0 * k + 1.0 - x) * l1 - k * l0) / (k + 1.0);
    l0 = l1;
    l1 = l2;
  }
  return l1;
}

}  // namespace

std::vector<cplx> coeffs_A(int n_max, const ModelParams& p, SqrtBranch branch) {
  p.validate();
  if (n_max < 0) throw InvalidArgument("coeffs_A: n_max < 0");
  std::vector<cplx> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  const int kmax = n_max - p.kappa;
  if (kmax < 0) return out;
  const double a2 = std::norm(p.alpha);

  if (p.r < kCoherentLimitR) {
    // a^dag^kappa |alpha>: e^{-|alpha|^2/2} alpha^k sqrt(n!)/k!, k = n - kappa.
    const double la = a2 > 0.0 ? std::log(std::abs(p.alpha)) : 0.0;
    const double th = std::arg(p.alpha);
    for (int k = 0; k <= kmax; ++k) {
      const int n = k + p.kappa;
      if (a2 == 0.0 && k > 0) break;
      const double L = -0.5 * a2 + k * la + 0.5 * log_factorial(n) - log_factorial(k);
      out[n] = std::polar(std::exp(L), k * th);
    }
    return out;
  }

  const double mu = p.mu();
  const cplx nu = p.nu();
  cplx sqrt_nu = std::sqrt(nu);
  if (branch == SqrtBranch::opposite) sqrt_nu = -sqrt_nu;
  const cplx z = cplx(0.0, -1.0) * p.alpha / (std::sqrt(2.0 * mu) * sqrt_nu);
  const cplx log_pre = -0.5 * a2 - p.alpha * p.alpha * std::conj(nu) / (2.0 * mu);
  const cplx w = sqrt_nu / std::sqrt(mu);  // (nu/mu)^{1/2}
  const double log_w = std::log(std::abs(w));
  const double arg_w = std::arg(w);
  const auto hs = hermite_normalized(z, kmax);

  for (int k = 0; k <= kmax; ++k) {
    const cplx m = hs.mantissa[k];
    if (m == 0.0) continue;
    const int n = k + p.kappa;
    const double L = log_pre.real() + 0.5 * (log_factorial(n) - log_factorial(k)) - 0.5 * std::log(mu) +
                     k * log_w + hs.log_mag[k] + std::log(std::abs(m));
    const double phase = log_pre.imag() + k * arg_w + std::arg(m);
    out[n] = kIPow[k & 3] * std::polar(std::exp(L), phase);
  }
  return out;
}

cplx coeff_A(int n, const ModelParams& p, SqrtBranch branch) {
  if (n < p.kappa) return 0.0;
  return coeffs_A(n, p, branch)[n];
}

ClosedSums closed_sums(const ModelParams& p) {
  p.validate();
  const int kappa = p.kappa;
  const double a2 = std::norm(p.alpha);
  const double kfact = std::exp(log_factorial(kappa));
  ClosedSums out;
  if (p.r < kCoherentLimitR) {
    out.plus = kfact * laguerre(kappa, -a2);
    out.minus = std::exp(-2.0 * a2) * kfact * laguerre(kappa, a2);
    return out;
  }
  const double mu = p.mu();
  const cplx nu = p.nu();
  const double anu = std::abs(nu);
  // One square root of 2 mu nu, used consistently in every argument.
  const cplx x0 = cplx(0.0, 1.0) * p.alpha / (std::sqrt(2.0 * mu) * std::sqrt(nu));
  const cplx arg_plus = anu * x0 - mu * std::conj(x0);
  const cplx arg_minus = anu * x0 + mu * std::conj(x0);
  const auto hx = hermite_seq(x0, 2 * kappa);
  const auto hp = hermite_seq(arg_plus, 2 * kappa);
  const auto hm = hermite_seq(arg_minus, 2 * kappa);
  cplx sp = 0.0;
  cplx sm = 0.0;
  for (int q = 0; q <= kappa; ++q) {
    for (int l = 0; l <= q; ++l) {
      const double c = (q & 1 ? -1.0 : 1.0) * binomial(kappa, q) * std::pow(anu, 2 * q - l) /
                       (std::pow(2.0, q) * std::exp(log_factorial(l) + log_factorial(q - l)));
      sp += c * hx.value(l) * hp.value(2 * q - l);
      sm += c * hx.value(l) * hm.value(2 * q - l);
    }
  }
  sp *= kfact;
  sm *= kfact * std::exp(-2.0 * a2);
  out.plus = sp.real();
  out.minus = sm.real();
  out.imag_residual = std::max(std::abs(sp.imag()), std::abs(sm.imag()));
  return out;
}

double normalization(const ModelParams& p) {
  const auto s = closed_sums(p);
  const double c2 = std::norm(p.c);
  const double total = (1.0 + c2) * s.plus + 2.0 * p.c.real() * s.minus;
  if (!(total > 1e-13 * (1.0 + c2) * s.plus) || !std::isfinite(total))
    throw DegenerateState("superposed state has vanishing norm (" + p.describe() + ")");
  return 1.0 / std::sqrt(total);
}

double truncation_tail_bound(const std::vector<cplx>& coeffs, int n_max, double total, int kappa,
                             double tanh_r) {
  double partial = 0.0;
  for (int n = 0; n <= n_max; ++n) partial += std::norm(coeffs[n]);
  // total - partial is meaningless below the summation roundoff; there the
  // analytic envelope alone bounds the tail.
  const double roundoff = 4.0 * (n_max + 1) * std::numeric_limits<double>::epsilon() * total;
  const double direct = total - partial > roundoff ? total - partial : 0.0;

  double envelope = 0.0;
  const int lo = std::max(1, n_max - 9);
  if (tanh_r > 1e-3) {
    // |c_n|^2 <= C tanh_r^n n^kappa, C fitted on the last ten retained terms.
    const double lt = std::log(tanh_r);
    double logC = -std::numeric_limits<double>::infinity();
    for (int n = lo; n <= n_max; ++n) {
      const double v = std::norm(coeffs[n]);
      if (v > 0.0) logC = std::max(logC, std::log(v) - n * lt - kappa * std::log(double(n)));
    }
    if (std::isfinite(logC)) {
      for (int n = n_max + 1; n < n_max + 200000; ++n) {
        const double term = std::exp(logC + n * lt + kappa * std::log(double(n)));
        envelope += term;
        if (term < 1e-20 * envelope && n > n_max + 10) break;
      }
    }
  } else {
    // Nearly coherent: geometric bound from the decay of the last nonzero pair.
    int n2 = -1;
    int n1 = -1;
    for (int n = n_max; n >= lo - 1 && n >= 0; --n) {
      if (std::norm(coeffs[n]) > 0.0) {
        if (n2 < 0)
          n2 = n;
        else {
          n1 = n;
          break;
        }
      }
    }
    if (n1 >= 0) {
      const double rho = std::pow(std::norm(coeffs[n2]) / std::norm(coeffs[n1]), 1.0 / (n2 - n1));
      envelope = rho < 1.0 ? std::norm(coeffs[n2]) * rho / (1.0 - rho)
                           : std::numeric_limits<double>::infinity();
    }
  }
  return std::max(direct, envelope);
}

FockState build_state(const ModelParams& p, double eps_trunc) {
  if (!(eps_trunc > 0.0) || eps_trunc > 1e-6) throw InvalidArgument("eps_trunc must be in (0, 1e-6]");
  const double norm = normalization(p);
  const double tau = std::tanh(p.r);
  int n_try = std::max(64, p.kappa + 32);
  while (true) {
    const auto A = coeffs_A(n_try, p);
    std::vector<cplx> c(A.size());
    for (int n = 0; n <= n_try; ++n) {
      const double sign = ((n - p.kappa) & 1) ? -1.0 : 1.0;
      c[n] = norm * (1.0 + sign * p.c) * A[n];
    }
    double partial = 0.0;
    for (int n = 0; n <= n_try - 10; ++n) {
      partial += std::norm(c[n]);
      if (n < p.kappa + 10 || 1.0 - partial > eps_trunc + 4.0 * (n + 1) * std::numeric_limits<double>::epsilon())
        continue;
      const double bound = truncation_tail_bound(c, n, 1.0, p.kappa, tau);
      if (bound < eps_trunc) {
        c.resize(static_cast<std::size_t>(n) + 1);
        return FockState{std::move(c), bound};
      }
    }
    if (n_try >= kMaxFockDim)
      throw InvalidArgument("build_state: truncation did not converge below n = " +
                            std::to_string(kMaxFockDim));
    n_try = std::min(2 * n_try, kMaxFockDim);
  }
}

FockState build_state_to(const ModelParams& p, int n_max) {
  if (n_max < 0 || n_max >= kMaxFockDim) throw InvalidArgument("build_state_to: n_max out of range");
  const double norm = normalization(p);
  const auto A = coeffs_A(n_max, p);
  std::vector<cplx> c(A.size());
  double partial = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const double sign = ((n - p.kappa) & 1) ? -1.0 : 1.0;
    c[n] = norm * (1.0 + sign * p.c) * A[n];
    partial += std::norm(c[n]);
  }
  return FockState{std::move(c), std::max(0.0, 1.0 - partial)};
}

FockState evolve(const FockState& s, const ModelParams& p, double t) {
  FockState out = s;
  const double w = p.omega - p.lambda_kerr;
  for (int n = 0; n <= s.n_max(); ++n) {
    const double nn = double(n);
    const double phase = -(w * nn * t + p.lambda_kerr * t * nn * nn);
    out.coeffs[n] = s.coeffs[n] * std::polar(1.0, phase);
  }
  return out;
}

FockState evolve_lambda_t(const FockState& s, const ModelParams& p, double lambda_t) {
  return evolve(s, p, lambda_t / p.lambda_kerr);
}

DensityMatrix density(const FockState& s) {
  const int d = s.n_max() + 1;
  Eigen::Map<const Eigen::VectorXcd> v(s.coeffs.data(), d);
  return DensityMatrix(v * v.adjoint());
}

Eigen::MatrixXcd p_rep_coeffs(const DensityMatrix& rho) {
  const int d = rho.dim();
  Eigen::MatrixXcd P(d, d);
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) {
      const double s = ((n + m) & 1) ? -1.0 : 1.0;
      P(n, m) = s * rho(n, m) * std::exp(-0.5 * (log_factorial(n) + log_factorial(m)));
    }
  return P;
}

}  // namespace kerrcat
