#include "kerrcat/kitten.hpp"

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

// Below this squeezing the closed overlap divides by sqrt(nu) ~ 0 and the
// Fock sum is used instead.
constexpr double kMinClosedR = 1e-6;

struct PairTerms {
  cplx U;
  cplx expo;  // the exponent's numerator: overlap carries exp(-expo / U)
};

PairTerms pair_terms(double mu, const ModelParams& pj, const ModelParams& pl) {
  const cplx aj = pj.alpha;
  const cplx nj = pj.nu();
  const cplx alc = std::conj(pl.alpha);
  const cplx nlc = std::conj(pl.nu());
  const cplx nl = pl.nu();
  const cplx U = mu * mu - nj * nlc;
  const cplx e = 0.5 * (std::norm(aj) + std::norm(pl.alpha)) * U - aj * alc +
                 (U * (aj * aj * std::conj(nj) + alc * alc * nl) - aj * aj * nlc - alc * alc * nj) / (2.0 * mu);
  return {U, e};
}

int component_dim(const ModelParams& base, double eps) {
  ModelParams single = base;
  single.c = 0.0;
  return build_state(single, eps).n_max() + 1;
}

cplx direct_overlap(const ModelParams& pj, const ModelParams& pl, int dim) {
  const auto a = coeffs_A(dim - 1, pj);
  const auto b = coeffs_A(dim - 1, pl);
  cplx acc = 0.0;
  for (int n = 0; n < dim; ++n) acc += a[n] * std::conj(b[n]);
  return acc;
}

}  // namespace

double KittenSpec::angle(int j) const { return theta_rot + 2.0 * kPi * j / p; }

ModelParams KittenSpec::component(int j) const {
  ModelParams out = base;
  const double a = angle(j);
  out.alpha = base.alpha * std::polar(1.0, a);
  out.theta_sq = base.theta_sq + 2.0 * a;
  out.c = 0.0;
  return out;
}

void KittenSpec::validate() const {
  base.validate();
  if (p < 1) throw InvalidArgument("kitten: p must be >= 1");
  if (static_cast<int>(f.size()) != p) throw InvalidArgument("kitten: need exactly p weights");
  if (!std::isfinite(theta_rot)) throw InvalidArgument("kitten: non-finite rotation");
  for (const auto& w : f)
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) throw InvalidArgument("kitten: non-finite weight");
}

KittenSpec kitten_selection(int p, const ModelParams& params) {
  params.validate();
  if (params.c != cplx(1.0, 0.0))
    throw UnsupportedSelection("kitten weights are only known for c = 1");
  if (p < 2 || p % 2 != 0) throw UnsupportedSelection("kitten weights need an even p >= 2");
  KittenSpec s;
  s.p = p;
  s.base = params;
  s.f.resize(p);
  for (int j = 0; j < p; ++j) {
    // j^2 (p+2)/p reduced mod 2 keeps the argument small for large j.
    const long long num = static_cast<long long>(j) * j * (p + 2) % (2LL * p);
    s.f[j] = std::polar(1.0, kPi * double(num) / p);
  }
  s.theta_rot = kPi / (2.0 * p) * (p - 2.0 * params.kappa + 1.0 - params.delta());
  return s;
}

double kitten_time(int p) {
  if (p < 1) throw InvalidArgument("kitten_time: p must be >= 1");
  return kPi / (2.0 * p);
}

cplx component_overlap(const ModelParams& pj, const ModelParams& pl) {
  if (pj.r != pl.r || pj.kappa != pl.kappa) throw InvalidArgument("component_overlap: r and kappa must match");
  if (pj.r < kMinClosedR) return direct_overlap(pj, pl, component_dim(pj, 1e-15));

  const double mu = pj.mu();
  const int k = pj.kappa;
  const auto [U, expo] = pair_terms(mu, pj, pl);
  const cplx nj = pj.nu();
  const cplx nlc = std::conj(pl.nu());
  // The roots are taken per factor; the principal root of the ratio
  // U / (nu_j nu_l*) picks the wrong sign when nu_j nu_l* is negative real.
  const cplx sj = std::sqrt(nj);
  const cplx sl = std::sqrt(nlc);
  const cplx sU = std::sqrt(U);
  const double s2mu = std::sqrt(2.0 * mu);
  const cplx x1 = -kI * pj.alpha / (s2mu * sj);
  const cplx x2 = -kI * (pj.alpha * nlc + std::conj(pl.alpha) * mu) / (s2mu * sl * sU);
  const auto h1 = hermite_seq(x1, 2 * k + 1);
  const auto h2 = hermite_seq(x2, 2 * k + 1);
  const cplx ratio = sU / (sj * sl);

  cplx total = 0.0;
  for (int p = 0; p <= k; ++p) {
    cplx inner = 0.0;
    for (int q = 0; q <= p; ++q)
      inner += std::pow(ratio, q) * h1.value(q) * h2.value(2 * p - q) /
               std::exp(log_factorial(q) + log_factorial(p - q));
    total += binomial(k, p) * std::pow(-nj * nlc / (2.0 * U), p) * inner;
  }
  return std::exp(log_factorial(k)) / sU * std::exp(-expo / U) * total;
}

double fiducial_norm_squared(const KittenSpec& spec) {
  spec.validate();
  cplx acc = 0.0;
  for (int j = 0; j < spec.p; ++j) {
    const auto pj = spec.component(j);
    for (int l = 0; l < spec.p; ++l)
      acc += spec.f[j] * std::conj(spec.f[l]) * component_overlap(pj, spec.component(l));
  }
  return acc.real();
}

double fiducial_normalization_k1(const KittenSpec& spec) {
  spec.validate();
  if (spec.base.kappa != 1) throw WrongKappa("closed kitten normalization needs kappa = 1");
  const double mu = spec.base.mu();
  cplx s = 0.0;
  for (int j = 0; j < spec.p; ++j) {
    const auto pj = spec.component(j);
    const cplx aj = pj.alpha;
    const cplx nj = pj.nu();
    for (int l = 0; l < spec.p; ++l) {
      const auto pl = spec.component(l);
      const cplx alc = std::conj(pl.alpha);
      const cplx nlc = std::conj(pl.nu());
      const auto [U, expo] = pair_terms(mu, pj, pl);
      const cplx poly = U * U + aj * alc * (mu * mu + nj * nlc) + mu * (aj * aj * nlc + alc * alc * nj) + nj * nlc * U;
      s += spec.f[j] * std::conj(spec.f[l]) / (U * U * std::sqrt(U)) * std::exp(-expo / U) * poly;
    }
  }
  if (!(s.real() > 0.0)) throw DegenerateState("kitten superposition is null");
  return 1.0 / std::sqrt(s.real());
}

FockState fiducial_state(const KittenSpec& spec, double eps_trunc) {
  spec.validate();
  if (!(eps_trunc > 0.0) || eps_trunc > 1e-6) throw InvalidArgument("eps_trunc must be in (0, 1e-6]");
  // Tail of the sum is at most p times the tail of one component in norm.
  const double eps_c = eps_trunc / (double(spec.p) * spec.p);
  ModelParams single = spec.base;
  single.c = 0.0;
  const auto one = build_state(single, eps_c);
  const int dim = one.n_max() + 1;
  const double comp_norm2 = closed_sums(single).plus;

  std::vector<cplx> v(dim, 0.0);
  for (int j = 0; j < spec.p; ++j) {
    const auto a = coeffs_A(dim - 1, spec.component(j));
    for (int n = 0; n < dim; ++n) v[n] += spec.f[j] * a[n];
  }
  const double norm2 = fiducial_norm_squared(spec);
  if (!(norm2 > 1e-13 * spec.p * comp_norm2)) throw DegenerateState("kitten superposition is numerically null");
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& x : v) x *= scale;
  const double tail_amp = spec.p * std::sqrt(one.tail_mass_bound * comp_norm2);
  return FockState{std::move(v), tail_amp * tail_amp / norm2};
}

double wigner_kitten_k1(const KittenSpec& spec, cplx beta) {
  const double C = fiducial_normalization_k1(spec);
  const double mu = spec.base.mu();
  const cplx bc = std::conj(beta);
  const double b2 = std::norm(beta);
  const double a2 = std::norm(spec.base.alpha);
  cplx total = 0.0;
  for (int j = 0; j < spec.p; ++j) {
    const auto pj = spec.component(j);
    const cplx aj = pj.alpha;
    const cplx nj = pj.nu();
    const cplx Fj = aj + 2.0 * bc * nj;
    const cplx Gj = aj + bc * nj;
    for (int l = 0; l < spec.p; ++l) {
      const auto pl = spec.component(l);
      const cplx al = pl.alpha;
      const cplx nl = pl.nu();
      const cplx nlc = std::conj(nl);
      const cplx U = mu * mu - nj * nlc;
      const cplx Flc = std::conj(al + 2.0 * bc * nl);
      const cplx Glc = std::conj(al + bc * nl);
      const cplx F = a2 + (aj * aj * std::conj(nj) + std::conj(al) * std::conj(al) * nl) / (2.0 * mu) -
                     2.0 * bc / mu * Gj - 2.0 * beta / mu * Glc +
                     (Fj * Flc - nlc * Fj * Fj / (2.0 * mu) - nj * Flc * Flc / (2.0 * mu)) / U;
      const cplx H = (mu * mu + nj * nlc) * Fj * Flc - mu * nlc * Fj * Fj - mu * nj * Flc * Flc -
                     U * (aj * std::conj(al) - mu * mu * (4.0 * b2 - 1.0) - Fj * Flc + 2.0 * mu * bc * Fj +
                          2.0 * mu * beta * Flc);
      total += spec.f[j] * std::conj(spec.f[l]) * H / (U * U * std::sqrt(U)) * std::exp(-2.0 * b2 - F);
    }
  }
  return 2.0 / kPi * C * C * total.real();
}

double hs_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  const int d = std::max(rho1.dim(), rho2.dim());
  const Eigen::MatrixXcd diff = rho1.resized(d).elements - rho2.resized(d).elements;
  // Tr(D^2) = sum |D_nm|^2 for Hermitian D.
  return std::sqrt(diff.squaredNorm());
}

double hs_distance(const FockState& a, const FockState& b) {
  // Tr(|a><a| - |b><b|)^2 = (|a|^2 - |b|^2)^2 + 2 (|a|^2 |b|^2 - |<a|b>|^2); the
  // bracket is summed through Lagrange's identity so near-equal states keep
  // full relative precision instead of bottoming out at sqrt(eps).
  const std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
  auto at = [](const FockState& s, std::size_t i) { return i < s.coeffs.size() ? s.coeffs[i] : cplx(0.0); };
  double cross = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx ai = at(a, i);
    const cplx bi = at(b, i);
    for (std::size_t k = i + 1; k < n; ++k) cross += std::norm(ai * at(b, k) - at(a, k) * bi);
  }
  const double dn = a.norm_squared() - b.norm_squared();
  return std::sqrt(dn * dn + 2.0 * cross);
}

QuadratureResult hs_distance_phase_space(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                         const PhaseSpaceGrid& grid, int threads) {
  const auto w1 = evaluate_field(QuasiDistribution::wigner(rho1), grid, threads);
  const auto w2 = evaluate_field(QuasiDistribution::wigner(rho2), grid, threads);
  std::vector<double> sq(w1.values.size());
  for (std::size_t i = 0; i < sq.size(); ++i) {
    const double d = w1.values[i] - w2.values[i];
    sq[i] = kPi * d * d;
  }
  auto r = integrate_samples(sq, grid);
  const double v = std::sqrt(std::max(r.value, 0.0));
  // First-order propagation of the integral's error through the square root.
  r.error_estimate = v > 0.0 ? r.error_estimate / (2.0 * v) : std::sqrt(r.error_estimate);
  r.value = v;
  return r;
}

std::vector<HsScanRow> hs_scan(const ModelParams& params, const FockState& reference, double t_begin,
                               double t_end, int points, int threads) {
  if (points < 1) throw InvalidArgument("hs_scan: need at least one point");
  if (!std::isfinite(t_begin) || !std::isfinite(t_end)) throw InvalidArgument("hs_scan: non-finite range");
  const auto psi = build_state(params);
  std::vector<HsScanRow> rows(points);
  parallel_for(
      static_cast<std::size_t>(points),
      [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
          const double lt = points == 1 ? t_begin : t_begin + (t_end - t_begin) * double(i) / (points - 1);
          rows[i] = {lt, hs_distance(evolve_lambda_t(psi, params, lt), reference)};
        }
      },
      threads);
  return rows;
}

double collapse_width(const ModelParams& params, const FockState& reference, double center, double threshold) {
  const auto psi = build_state(params);
  auto d = [&](double lt) { return hs_distance(evolve_lambda_t(psi, params, lt), reference) - threshold; };
  if (!(d(center) < 0.0)) throw InvalidArgument("collapse_width: distance at the center is above threshold");
  const double step = kPi / kHsPointsPerPi;
  auto edge = [&](double dir) {
    double inside = center;
    double outside = center + dir * step;
    int guard = 0;
    while (d(outside) < 0.0) {
      inside = outside;
      outside += dir * step;
      if (++guard > kHsPointsPerPi) throw InvalidArgument("collapse_width: no crossing within pi");
    }
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (inside + outside);
      (d(mid) < 0.0 ? inside : outside) = mid;
    }
    return 0.5 * (inside + outside);
  };
  return edge(1.0) - edge(-1.0);
}

void write_hs_scan_csv(const std::filesystem::path& path, const std::vector<HsScanRow>& rows,
                       const std::vector<std::string>& comments) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "lambda_t, d_hs\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.12g, %.17g\n", r.lambda_t, r.d_hs);
    out << buf;
  }
}

}  // namespace kerrcat
