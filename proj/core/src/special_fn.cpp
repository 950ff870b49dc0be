#include "kerrcat/special_fn.hpp"

#include <cmath>

#include "kerrcat/errors.hpp"

namespace kerrcat {

namespace {

constexpr double kRescaleAbove = 1e250;
constexpr double kMantissaHigh = 1e100;
constexpr double kMantissaLow = 1e-100;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

cplx HermiteSequence::value(int n) const {
  return values.at(static_cast<std::size_t>(n)) * std::exp(log_scale);
}

HermiteSequence hermite_seq(cplx x, int n_max) {
  if (n_max < 0) throw InvalidArgument("hermite_seq: n_max < 0");
  if (!finite(x)) throw InvalidArgument("hermite_seq: non-finite argument");
  HermiteSequence seq;
  seq.argument = x;
  seq.values.resize(static_cast<std::size_t>(n_max) + 1);
  seq.values[0] = 1.0;
  if (n_max >= 1) seq.values[1] = 2.0 * x;
  for (int n = 1; n < n_max; ++n) {
    cplx next = 2.0 * x * seq.values[n] - 2.0 * n * seq.values[n - 1];
    if (std::abs(next) > kRescaleAbove) {
      const double f = 1.0 / kRescaleAbove;
      for (int j = 0; j <= n; ++j) seq.values[j] *= f;
      next *= f;
      seq.log_scale += std::log(kRescaleAbove);
    }
    seq.values[n + 1] = next;
  }
  return seq;
}

cplx hermite(int n, cplx x) {
  if (n < 0) return 0.0;
  cplx h0 = 1.0;
  if (n == 0) return h0;
  cplx h1 = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    cplx h2 = 2.0 * x * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

cplx ScaledHermite::value(int n) const {
  const auto i = static_cast<std::size_t>(n);
  return mantissa.at(i) * std::exp(log_mag.at(i));
}

ScaledHermite hermite_normalized(cplx x, int n_max) {
  if (n_max < 0) throw InvalidArgument("hermite_normalized: n_max < 0");
  if (!finite(x)) throw InvalidArgument("hermite_normalized: non-finite argument");
  ScaledHermite out;
  out.mantissa.resize(static_cast<std::size_t>(n_max) + 1);
  out.log_mag.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  cplx prev = 0.0;
  cplx cur = 1.0;
  double scale = 0.0;
  out.mantissa[0] = cur;
  for (int n = 0; n < n_max; ++n) {
    cplx next = std::sqrt(2.0 / (n + 1)) * x * cur - std::sqrt(double(n) / (n + 1)) * prev;
    const double a = std::abs(next);
    if (a > kMantissaHigh) {
      next /= kMantissaHigh;
      cur /= kMantissaHigh;
      scale += std::log(kMantissaHigh);
    } else if (a != 0.0 && a < kMantissaLow && std::abs(cur) < kMantissaLow) {
      next *= kMantissaHigh;
      cur *= kMantissaHigh;
      scale -= std::log(kMantissaHigh);
    }
    prev = cur;
    cur = next;
    out.mantissa[n + 1] = cur;
    out.log_mag[n + 1] = scale;
  }
  return out;
}

double hyp2f0_poly(int n, int m, double tau) {
  if (n < 0 || m < 0) throw InvalidArgument("hyp2f0_poly: negative index");
  const int top = std::min(n, m);
  double sum = 1.0;
  double comp = 0.0;
  double term = 1.0;
  for (int l = 1; l <= top; ++l) {
    term *= double(n - l + 1) * double(m - l + 1) * tau / l;
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double bessel_i(int n, double x) {
  if (n < 0) throw InvalidArgument("bessel_i: negative order");
  if (x < 0.0 || !std::isfinite(x)) throw InvalidArgument("bessel_i: x must be finite and >= 0");
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  const double h = 0.5 * x;
  const double q = h * h;
  double term = std::exp(n * std::log(h) - log_factorial(n));
  double sum = term;
  for (int k = 0; k < 100000; ++k) {
    const double ratio = q / ((k + 1.0) * (n + k + 1.0));
    term *= ratio;
    sum += term;
    if (ratio < 1.0 && term * ratio / (1.0 - ratio) < 1e-17 * sum) break;
  }
  return sum;
}

cplx bessel_i_reduced(int nu, cplx w) {
  if (nu < 0) throw InvalidArgument("bessel_i_reduced: negative order");
  cplx term = std::exp(-log_factorial(nu));
  cplx sum = term;
  const double aw = std::abs(w);
  for (int k = 0; k < 100000; ++k) {
    const double denom = (k + 1.0) * (nu + k + 1.0);
    term *= w / denom;
    sum += term;
    const double ratio = aw / (k + 2.0) / (nu + k + 2.0);
    if (ratio < 1.0 && std::abs(term) * ratio / (1.0 - ratio) < 1e-17 * std::abs(sum)) break;
    if (term == 0.0) break;
  }
  return sum;
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace kerrcat
