// Both sides of the Hermite/Charlier generating-function identities. The
// infinite side is summed with normalized Hermite values so that large orders
// stay representable; the closed side uses plain recurrences at low order.
// Near |t| = 1 with x ~ -y the Mehler-type series cancel by up to 1e9 for real
// arguments, so the infinite side runs in long double throughout.

#include <cmath>
#include <complex>
#include <functional>
#include <string>

#include "kerrcat/errors.hpp"
#include "kerrcat/special_fn.hpp"

namespace kerrcat {

namespace {

constexpr int kTermCap = 4000;

using ld = long double;
using cld = std::complex<ld>;

constexpr ld kLn2 = 0.693147180559945309417232121458176568L;
constexpr ld kMantissaHigh = 1e300L;

bool needs_unit_t(Identity id) {
  switch (id) {
    case Identity::bilinear_photon_added:
    case Identity::weighted_mehler:
    case Identity::offset_mehler:
    case Identity::shifted_mehler:
      return true;
    default:
      return false;
  }
}

// Sums term(n) for n = 0, 1, ... until the term falls below 1e-16 of the
// partial sum three times in a row (and at least n_min terms were taken).
cplx sum_series(const std::function<cld(int)>& term, int n_min, int* used) {
  cld sum = 0.0L;
  int quiet = 0;
  for (int n = 0; n < kTermCap; ++n) {
    const cld t = term(n);
    sum += t;
    if (n >= n_min && std::abs(t) <= 1e-16L * std::abs(sum))
      ++quiet;
    else
      quiet = 0;
    if (quiet >= 3) {
      if (used) *used = n + 1;
      return cplx(double(sum.real()), double(sum.imag()));
    }
  }
  throw DivergentSeries("identity series did not converge within " + std::to_string(kTermCap) +
                        " terms");
}

ld log_fact(int n) { return std::lgamma(ld(n) + 1.0L); }

// h_n = H_n / sqrt(2^n n!) as mantissa * exp(log_mag), in long double.
struct HermiteLD {
  std::vector<cld> mantissa;
  std::vector<ld> log_mag;
};

HermiteLD hermite_ld(cplx x0, int n_max) {
  const cld x(x0.real(), x0.imag());
  HermiteLD out;
  out.mantissa.resize(static_cast<std::size_t>(n_max) + 1);
  out.log_mag.assign(static_cast<std::size_t>(n_max) + 1, 0.0L);
  cld prev = 0.0L;
  cld cur = 1.0L;
  ld scale = 0.0L;
  out.mantissa[0] = cur;
  for (int n = 0; n < n_max; ++n) {
    cld next = std::sqrt(2.0L / (n + 1)) * x * cur - std::sqrt(ld(n) / (n + 1)) * prev;
    if (std::abs(next) > kMantissaHigh) {
      next /= kMantissaHigh;
      cur /= kMantissaHigh;
      scale += std::log(kMantissaHigh);
    }
    prev = cur;
    cur = next;
    out.mantissa[n + 1] = cur;
    out.log_mag[n + 1] = scale;
  }
  return out;
}

// x^n for real x and integer n >= 0 as a sign and a log magnitude.
struct SignedLog {
  ld sign;
  ld log_abs;
};

SignedLog power_of(double t, int n) {
  if (n == 0) return {1.0L, 0.0L};
  if (t == 0.0) return {0.0L, 0.0L};
  return {(t < 0 && (n & 1)) ? -1.0L : 1.0L, n * std::log(std::abs(ld(t)))};
}

cld scaled(const SignedLog& p, ld extra_log, cld mant) {
  if (p.sign == 0.0L) return 0.0L;
  return p.sign * mant * std::exp(p.log_abs + extra_log);
}

cplx mehler_kernel(double t, cplx x, cplx y) {
  return std::exp(-(t * t * x * x - 2.0 * t * x * y + t * t * y * y) / (1.0 - t * t));
}

int minimum_terms(const IdentityInputs& in) {
  const double size = std::abs(in.x) + std::abs(in.y) + std::abs(in.t);
  return 20 + 2 * (in.k + in.l + in.n + in.m) + static_cast<int>(10.0 * size * size);
}

}  // namespace

// sum_k w^k nu! / (k! (nu+k)!) = nu! Itilde_nu(w); stays O(1) for large nu.
cplx bessel_i_scaled(int nu, cplx w) {
  cplx term = 1.0;
  cplx sum = 1.0;
  const double aw = std::abs(w);
  for (int k = 0; k < 100000; ++k) {
    term *= w / ((k + 1.0) * (nu + k + 1.0));
    sum += term;
    const double ratio = aw / (k + 2.0) / (nu + k + 2.0);
    if (ratio < 1.0 && std::abs(term) * ratio / (1.0 - ratio) < 1e-17 * std::abs(sum)) break;
    if (term == 0.0) break;
  }
  return sum;
}

// I_l(2t) = t^l Itilde_l(t^2) and I_2l(4 sqrt(xyt)) = (4xyt)^l Itilde_2l(4xyt);
// the (xy)^l factors of the textbook form cancel against these. Each term is
// assembled in log form since x^2l and 1/(2l)! leave double range long before
// the series has converged for large |x|.
cplx mehler_bessel_sum(double t, cplx x, cplx y) {
  const double t2 = t * t;
  const cplx w = 4.0 * x * y * t;
  const double log_4t2 = t2 > 0.0 ? std::log(4.0 * t2) : 0.0;
  const cplx log_x2 = x != 0.0 ? 2.0 * std::log(x) : 0.0;
  const cplx log_y2 = y != 0.0 ? 2.0 * std::log(y) : 0.0;
  IdentityInputs size;
  size.t = t;
  size.x = x;
  size.y = y;
  return sum_series(
      [&](int l) -> cld {
        if (l == 0) return bessel_i_scaled(0, t2) * bessel_i_scaled(0, w);
        if (t2 == 0.0) return 0.0L;
        const double common = l * log_4t2 - log_factorial(l) - log_factorial(2 * l);
        cplx powers = 0.0;
        if (x != 0.0) powers += std::exp(double(l) * log_x2 + common);
        if (y != 0.0) powers += std::exp(double(l) * log_y2 + common);
        const cplx v = (l & 1 ? -1.0 : 1.0) * powers * bessel_i_scaled(l, t2) * bessel_i_scaled(2 * l, w);
        return cld(v.real(), v.imag());
      },
      std::min(minimum_terms(size), kTermCap / 2), nullptr);
}

std::string_view identity_name(Identity id) {
  switch (id) {
    case Identity::bilinear_photon_added: return "bilinear_photon_added";
    case Identity::charlier_bilinear: return "charlier_bilinear";
    case Identity::shifted_generating: return "shifted_generating";
    case Identity::weighted_mehler: return "weighted_mehler";
    case Identity::offset_mehler: return "offset_mehler";
    case Identity::shifted_mehler: return "shifted_mehler";
    case Identity::factorial_shift: return "factorial_shift";
    case Identity::mehler_bessel: return "mehler_bessel";
  }
  return "unknown";
}

IdentitySides identity_sides(Identity id, const IdentityInputs& in) {
  const double t = in.t;
  const cplx x = in.x;
  const cplx y = in.y;
  const int k = in.k;
  if (!std::isfinite(t)) throw InvalidArgument("identity: non-finite t");
  if (k < 0 || in.l < 0 || in.n < 0 || in.m < 0) throw InvalidArgument("identity: negative index");
  if (needs_unit_t(id) && std::abs(t) >= 1.0)
    throw DivergentSeries(std::string(identity_name(id)) + " requires |t| < 1");

  const int n_min = std::min(minimum_terms(in), kTermCap / 2);
  const int span = kTermCap + k + in.l + 2;
  IdentitySides out;

  switch (id) {
    case Identity::bilinear_photon_added: {
      const auto hx = hermite_ld(x, span);
      const auto hy = hermite_ld(y, span);
      out.lhs = sum_series(
          [&](int n) -> cld {
            const ld lg = log_fact(n + k) - log_fact(n) + hx.log_mag[n] + hy.log_mag[n];
            return scaled(power_of(t, n), lg, hx.mantissa[n] * hy.mantissa[n]);
          },
          n_min, &out.terms);
      const double s = std::sqrt(1.0 - t * t);
      const cplx arg = (t * x - y) / s;
      cplx acc = 0.0;
      for (int p = 0; p <= k; ++p) {
        for (int l = 0; l <= p; ++l) {
          const double c = (p & 1 ? -1.0 : 1.0) * binomial(k, p) /
                           (std::pow(2.0, p) * std::exp(log_factorial(l) + log_factorial(p - l)));
          acc += c * std::pow(t / s, 2 * p - l) * hermite(l, x) * hermite(2 * p - l, arg);
        }
      }
      out.rhs = std::exp(log_factorial(k)) / s * mehler_kernel(t, x, y) * acc;
      break;
    }
    case Identity::charlier_bilinear: {
      if (t <= 0.0) throw InvalidArgument("charlier_bilinear requires t > 0");
      out.lhs = sum_series(
          [&](int l) -> cld {
            const ld w = std::exp(l * std::log(ld(t)) - log_fact(l)) * (l & 1 ? -1.0L : 1.0L);
            return cld(w * hyp2f0_poly(in.n, l, -1.0 / t) * hyp2f0_poly(l, in.m, -1.0 / t));
          },
          n_min + static_cast<int>(4 * t), &out.terms);
      out.rhs = std::pow(2.0, in.n + in.m) * std::exp(-t) * hyp2f0_poly(in.n, in.m, -1.0 / (4.0 * t));
      break;
    }
    case Identity::shifted_generating: {
      const auto hx = hermite_ld(x, span);
      out.lhs = sum_series(
          [&](int n) -> cld {
            const int j = n + k;
            const ld lg = 0.5 * (j * kLn2 + log_fact(j)) - log_fact(n) + hx.log_mag[j];
            return ld(n + k + 1) * scaled(power_of(t, n), lg, hx.mantissa[j]);
          },
          n_min, &out.terms);
      out.rhs = (t * hermite(k + 1, x - t) + double(k + 1) * hermite(k, x - t)) *
                std::exp(2.0 * t * x - t * t);
      break;
    }
    case Identity::weighted_mehler: {
      const auto hx = hermite_ld(x, span);
      const auto hy = hermite_ld(y, span);
      out.lhs = sum_series(
          [&](int n) -> cld {
            return ld(n + 1) *
                   scaled(power_of(t, n), hx.log_mag[n] + hy.log_mag[n], hx.mantissa[n] * hy.mantissa[n]);
          },
          n_min, &out.terms);
      const double tt = t * t;
      out.rhs = (1.0 + 2.0 * t * (1.0 + tt) * x * y - tt * (1.0 + 2.0 * (x * x + y * y))) /
                std::pow(1.0 - tt, 2.5) * mehler_kernel(t, x, y);
      break;
    }
    case Identity::offset_mehler: {
      const auto hx = hermite_ld(x, span);
      const auto hy = hermite_ld(y, span);
      out.lhs = sum_series(
          [&](int n) -> cld {
            const ld lg = 0.5 * (k * kLn2 + log_fact(n + k) - log_fact(n)) +
                              hx.log_mag[n + k] + hy.log_mag[n];
            return scaled(power_of(t, n), lg, hx.mantissa[n + k] * hy.mantissa[n]);
          },
          n_min, &out.terms);
      const double s = std::sqrt(1.0 - t * t);
      out.rhs = std::pow(1.0 - t * t, -0.5 * (k + 1)) * hermite(k, (x - t * y) / s) *
                mehler_kernel(t, x, y);
      break;
    }
    case Identity::shifted_mehler: {
      const auto hx = hermite_ld(x, span);
      const auto hy = hermite_ld(y, span);
      out.lhs = sum_series(
          [&](int n) -> cld {
            const ld lg = k * kLn2 + log_fact(n + k) - log_fact(n) + hx.log_mag[n + k] +
                              hy.log_mag[n + k];
            return scaled(power_of(t, n), lg, hx.mantissa[n + k] * hy.mantissa[n + k]);
          },
          n_min, &out.terms);
      // (-t)^k (s/t)^p written as (-1)^k t^(k-p) s^p, regular at t = 0.
      const double s = std::sqrt(1.0 - t * t);
      const cplx arg = (x * t - y) / s;
      cplx acc = 0.0;
      for (int p = 0; p <= k; ++p)
        acc += binomial(k, p) * std::pow(t, k - p) * std::pow(s, p) * hermite(p, x) *
               hermite(2 * k - p, arg);
      out.rhs = (k & 1 ? -1.0 : 1.0) * std::pow(1.0 - t * t, -0.5 * (2 * k + 1)) *
                mehler_kernel(t, x, y) * acc;
      break;
    }
    case Identity::factorial_shift: {
      const int l = in.l;
      const auto hx = hermite_ld(x, span);
      out.lhs = sum_series(
          [&](int n) -> cld {
            const int j = n + l - k;
            if (j < 0) return 0.0L;
            const ld lg = log_fact(n + l) - log_fact(n) - log_fact(j) +
                              0.5 * (j * kLn2 + log_fact(j)) + hx.log_mag[j];
            return scaled(power_of(t, n), lg, hx.mantissa[j]);
          },
          n_min + k, &out.terms);
      cplx acc = 0.0;
      for (int p = 0; p <= k; ++p) {
        if (l - k + p < 0) continue;
        acc += std::pow(t, p) * std::exp(log_factorial(k - p)) * binomial(l, k - p) * binomial(k, p) *
               hermite(l - k + p, x - t);
      }
      out.rhs = std::exp(-t * t + 2.0 * x * t) * acc;
      break;
    }
    case Identity::mehler_bessel: {
      const auto hx = hermite_ld(x, span);
      const auto hy = hermite_ld(y, span);
      out.lhs = sum_series(
          [&](int n) -> cld {
            const ld lg = -log_fact(n) + hx.log_mag[n] + hy.log_mag[n];
            return scaled(power_of(2.0 * t, n), lg, hx.mantissa[n] * hy.mantissa[n]);
          },
          n_min, &out.terms);
      out.rhs = mehler_bessel_sum(t, x, y);
      break;
    }
  }
  return out;
}

double check_identity(Identity id, const IdentityInputs& in) {
  const auto s = identity_sides(id, in);
  return std::abs(s.lhs - s.rhs) / (1.0 + std::abs(s.rhs));
}

}  // namespace kerrcat
