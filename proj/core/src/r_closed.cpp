// Closed-form R_sigma at the Kerr times where the evolved state is a finite
// superposition of rotated photon-added squeezed coherent states.
//
// R is evaluated as N^2/(pi s) sum_l (-(1-s)/s)^l |sum_branches w_b <l|D(beta)^dag|b>|^2.
// Each branch a^dag^kappa S(xi') D(alpha')|0> is moved through the displacement,
//   D(beta)^dag a^dag^kappa = (a^dag + beta*)^kappa D(beta)^dag,
//   D(-beta) S(xi') D(alpha')|0> = e^{-i Im(gamma alpha'*)} S(xi') D(alpha' - gamma)|0>,
// with gamma = mu beta - nu' beta*, so its displaced amplitudes are finite
// combinations of squeezed coherent amplitudes. Every term of the l-sum is
// then bounded, unlike the form that scales beta by 1/s, whose alternating
// terms reach 1e15 at s = 1/2 for moderate r and |beta|.

#include <cmath>
#include <complex>
#include <numbers>

#include "kerrcat/errors.hpp"
#include "kerrcat/fock_state.hpp"
#include "kerrcat/phase_space.hpp"

namespace kerrcat {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

struct Branch {
  cplx weight;
  cplx alpha;
  cplx nu;
};

using ld = long double;
using cld = std::complex<ld>;

// <l|D(beta)^dag a^dag^kappa S(xi') D(alpha')|0> for l = 0..l_max.
// Below sigma = 1/2 the l-sum weights grow like ((1-s)/s)^l and its terms
// exceed the result by up to 1e6, so these amplitudes are built in long
// double from the eigenvalue relation (mu a - nu' a^dag) psi = alpha'' psi of
// the shifted squeezed coherent state, rather than from the log-scaled
// Hermite form, which is only good to about 1e-14.
std::vector<cld> displaced_amplitudes(const Branch& br, double r, int kappa, cplx beta, int l_max) {
  const ld mu = std::cosh(static_cast<ld>(r));
  const cld nu(br.nu.real(), br.nu.imag());
  const cld b(beta.real(), beta.imag());
  const cld a0(br.alpha.real(), br.alpha.imag());
  const cld gamma = mu * b - nu * std::conj(b);
  const cld a = a0 - gamma;
  std::vector<cld> phi(static_cast<std::size_t>(l_max) + 1);
  phi[0] = std::exp(-std::norm(a) / 2 - a * a * std::conj(nu) / (2 * mu)) / std::sqrt(mu);
  if (l_max > 0) phi[1] = a * phi[0] / mu;
  for (int l = 1; l < l_max; ++l)
    phi[l + 1] = (a * phi[l] + nu * std::sqrt(static_cast<ld>(l)) * phi[l - 1]) / (mu * std::sqrt(static_cast<ld>(l + 1)));

  const cld phase = std::polar(ld(1), -std::imag(gamma * std::conj(a0)));
  const cld bc = std::conj(b);
  std::vector<cld> bpow(static_cast<std::size_t>(kappa) + 1, ld(1));
  for (int k = 1; k <= kappa; ++k) bpow[k] = bpow[k - 1] * bc;
  std::vector<cld> out(static_cast<std::size_t>(l_max) + 1, ld(0));
  for (int l = 0; l <= l_max; ++l) {
    cld acc = 0;
    ld lift = 1;  // sqrt(l! / (l - p)!)
    for (int p = 0; p <= std::min(kappa, l); ++p) {
      if (p > 0) lift *= std::sqrt(static_cast<ld>(l - p + 1));
      acc += static_cast<ld>(binomial(kappa, p)) * bpow[kappa - p] * lift * phi[l - p];
    }
    out[l] = phase * acc;
  }
  return out;
}

std::vector<Branch> branches(const ModelParams& p, KittenTime when) {
  const cplx c = p.c;
  const cplx a = p.alpha;
  const cplx nu = p.nu();
  const double shift = (p.delta() - 1.0 + 2.0 * p.kappa);
  auto rot = [](double phi, int k) { return std::polar(1.0, -k * phi); };
  std::vector<Branch> b;
  switch (when) {
    case KittenTime::t0:
      b.push_back({1.0, a, nu});
      b.push_back({c, -a, nu});
      break;
    case KittenTime::quarter: {
      const double p1 = shift * kPi / 4.0;
      const cplx e1 = rot(p1, 1);
      const cplx e2 = rot(p1, 2);
      const cplx cp = (c + 1.0) / 2.0;
      const cplx cm = -(c - 1.0) / 2.0 * std::polar(1.0, -kPi / 4.0);
      b.push_back({cp, kI * a * e1, -e2 * nu});
      b.push_back({cp, -kI * a * e1, -e2 * nu});
      b.push_back({cm, a * e1, e2 * nu});
      b.push_back({-cm, -a * e1, e2 * nu});
      break;
    }
    case KittenTime::eighth: {
      const double p2 = shift * kPi / 8.0;
      const cplx cp = (c + 1.0) / 4.0;
      const cplx e1 = rot(p2, 1);
      const cplx e2 = rot(p2, 2);
      b.push_back({cp * cplx(1, -1), a * e1, e2 * nu});
      b.push_back({cp * cplx(1, -1), -a * e1, e2 * nu});
      b.push_back({cp * cplx(1, 1), kI * a * e1, -e2 * nu});
      b.push_back({cp * cplx(1, 1), -kI * a * e1, -e2 * nu});
      const cplx cm = -(c - 1.0) / 4.0 * std::polar(1.0, kPi / 8.0) * cplx(1, -1);
      for (double off : {kPi / 4.0, -kPi / 4.0}) {
        const cplx f1 = rot(p2 + off, 1);
        const cplx f2 = rot(p2 + off, 2);
        b.push_back({cm, a * f1, f2 * nu});
        b.push_back({-cm, -a * f1, f2 * nu});
      }
      break;
    }
  }
  return b;
}

}  // namespace

double r_closed(const ModelParams& p, cplx beta, double sigma, KittenTime when) {
  if (!(sigma > 0.0) || sigma > 1.0 || !std::isfinite(sigma))
    throw SigmaOutOfRange("sigma must lie in (0, 1], got " + std::to_string(sigma));
  p.validate();
  const double norm = normalization(p);
  const double q = (1.0 - sigma) / sigma;
  if (q * std::tanh(p.r) >= 1.0)
    throw DivergentSeries("R_sigma series diverges at this sigma for r = " + std::to_string(p.r));
  const auto brs = branches(p, when);

  for (int l_max = std::max(128, 4 * p.kappa + 64);; l_max *= 2) {
    std::vector<cld> g(l_max + 1, ld(0));
    for (const auto& br : brs) {
      if (br.weight == 0.0) continue;
      const cld w(br.weight.real(), br.weight.imag());
      const auto amp = displaced_amplitudes(br, p.r, p.kappa, beta, l_max);
      for (int l = 0; l <= l_max; ++l) g[l] += w * amp[l];
    }
    ld sum = 0;
    ld mass = 0;
    int quiet = 0;
    ld qpow = 1;
    for (int l = 0; l <= l_max; ++l) {
      const ld term = qpow * std::norm(g[l]);
      sum += term;
      mass += std::abs(term);
      qpow *= -q;
      if (l > 2 * p.kappa + 8 && std::abs(term) <= ld(1e-19) * std::abs(sum) + ld(1e-300))
        ++quiet;
      else
        quiet = 0;
      if (quiet < 3) continue;
      // Long double carries 19 digits; past 1e10 cancellation the result would not hold 1e-9.
      if (mass > ld(1e10) * std::abs(sum))
        throw DivergentSeries("r_closed: l-sum cancels by " + std::to_string(static_cast<double>(mass / std::abs(sum))) +
                              " at sigma = " + std::to_string(sigma));
      return norm * norm / (kPi * sigma) * static_cast<double>(sum);
    }
    if (l_max >= 4096) throw DivergentSeries("r_closed: l-sum did not converge");
  }
}

}  // namespace kerrcat
