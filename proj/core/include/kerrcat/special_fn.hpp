#pragma once

#include <complex>
#include <string_view>
#include <vector>

namespace kerrcat {

using cplx = std::complex<double>;

/// Physicists' Hermite polynomials H_0..H_n at one argument.
/// The true values are `values[n] * exp(log_scale)`; the scale is shared by
/// the whole sequence and only becomes nonzero when the recurrence would
/// overflow, in which case the low-order entries may underflow to zero.
struct HermiteSequence {
  cplx argument;
  std::vector<cplx> values;
  double log_scale = 0.0;

  int n_max() const { return static_cast<int>(values.size()) - 1; }
  cplx value(int n) const;
};

HermiteSequence hermite_seq(cplx x, int n_max);

/// Single Hermite value by forward recurrence, no scaling (low orders only).
cplx hermite(int n, cplx x);

/// Normalized Hermite values h_n(x) = H_n(x) / sqrt(2^n n!) with a
/// per-entry exponent: h_n = mantissa[n] * exp(log_mag[n]).
struct ScaledHermite {
  std::vector<cplx> mantissa;
  std::vector<double> log_mag;

  cplx value(int n) const;
};

ScaledHermite hermite_normalized(cplx x, int n_max);

/// Terminating 2F0(-n, -m;; tau), compensated summation.
double hyp2f0_poly(int n, int m, double tau);

/// Modified Bessel I_n(x) for x >= 0 by power series.
double bessel_i(int n, double x);

/// sum_k w^k / (k! (nu+k)!), entire in w; I_nu(z) = (z/2)^nu * this at w = z^2/4.
cplx bessel_i_reduced(int nu, cplx w);

/// sum_n t^n H_n(x) H_n(y) / n!^2 through its modified-Bessel resummation,
/// written so that it stays regular at x = 0 or y = 0.
cplx mehler_bessel_sum(double t, cplx x, cplx y);

double log_factorial(int n);
double binomial(int n, int k);

enum class Identity {
  bilinear_photon_added,  // sum (n+k)! t^n H_n H_n / (2^n n!^2)
  charlier_bilinear,      // product of two terminating 2F0 summed over l
  shifted_generating,     // sum (n+k+1) t^n H_{n+k}(x) / n!
  weighted_mehler,        // sum (n+1) t^n H_n H_n / (2^n n!)
  offset_mehler,          // sum t^n H_{n+k}(x) H_n(y) / (2^n n!)
  shifted_mehler,         // sum t^n H_{n+k}(x) H_{n+k}(y) / (2^n n!)
  factorial_shift,        // sum (n+l)! t^n H_{n+l-k}(x) / (n! (n+l-k)!)
  mehler_bessel,          // sum t^n H_n H_n / n!^2 resummed with Bessel functions
};

inline constexpr Identity kAllIdentities[] = {
    Identity::bilinear_photon_added, Identity::charlier_bilinear,
    Identity::shifted_generating,    Identity::weighted_mehler,
    Identity::offset_mehler,         Identity::shifted_mehler,
    Identity::factorial_shift,       Identity::mehler_bessel};

std::string_view identity_name(Identity id);

struct IdentityInputs {
  int k = 0;
  int l = 0;
  int n = 0;
  int m = 0;
  double t = 0.0;
  cplx x{};
  cplx y{};
};

struct IdentitySides {
  cplx lhs;
  cplx rhs;
  int terms = 0;
};

IdentitySides identity_sides(Identity id, const IdentityInputs& in);

/// |LHS - RHS| / (1 + |RHS|). Throws DivergentSeries outside |t| < 1 where
/// the series needs it.
double check_identity(Identity id, const IdentityInputs& in);

}  // namespace kerrcat
