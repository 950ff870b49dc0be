#include "kerrcat/quad_engine.hpp"

#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "kerrcat/errors.hpp"

namespace kerrcat {

void PhaseSpaceGrid::validate() const {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw InvalidArgument("grid half_width must be > 0");
  if (points_per_axis < 3) throw InvalidArgument("grid needs at least 3 points per axis");
}

int default_thread_count() {
  if (const char* env = std::getenv("KERRCAT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  int threads) {
  if (n == 0) return;
  std::size_t workers = static_cast<std::size_t>(threads > 0 ? threads : default_thread_count());
  workers = std::min(workers, n);
  if (workers <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
  body(0, std::min(n, chunk));
  for (auto& t : pool) t.join();
}

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

std::vector<double> sample_grid(const std::function<double(cplx)>& f, const PhaseSpaceGrid& g,
                                int threads) {
  g.validate();
  const int P = g.points_per_axis;
  std::vector<double> out(g.size());
  parallel_for(
      static_cast<std::size_t>(P),
      [&](std::size_t jb, std::size_t je) {
        for (std::size_t j = jb; j < je; ++j)
          for (int i = 0; i < P; ++i) out[j * P + i] = f(g.point(i, static_cast<int>(j)));
      },
      threads);
  return out;
}

QuadratureResult integrate_samples(const std::vector<double>& samples, const PhaseSpaceGrid& g) {
  const int P = g.points_per_axis;
  if (samples.size() != g.size()) throw InvalidArgument("sample count does not match grid");
  QuadratureResult r;
  r.points = P;
  r.spacing = g.spacing();
  r.value = pairwise_sum(samples) * g.cell_area();
  std::vector<double> coarse;
  coarse.reserve(g.size() / 4 + P);
  for (int j = 0; j < P; j += 2)
    for (int i = 0; i < P; i += 2) coarse.push_back(samples[std::size_t(j) * P + i]);
  const double coarse_value = pairwise_sum(coarse) * 4.0 * g.cell_area();
  r.error_estimate = std::abs(r.value - coarse_value);
  return r;
}

QuadratureResult integrate_2d(const std::function<double(cplx)>& f, const PhaseSpaceGrid& g, double tol,
                              int threads) {
  const auto r = integrate_samples(sample_grid(f, g, threads), g);
  if (r.error_estimate > tol)
    throw UnderResolvedGrid("2-D quadrature error estimate " + std::to_string(r.error_estimate) +
                            " exceeds tolerance " + std::to_string(tol));
  return r;
}

QuadratureResult integrate_samples_1d(const std::vector<double>& y, double h) {
  const std::size_t n = y.size() - 1;
  if (y.size() < 5 || n % 4 != 0) throw InvalidArgument("Simpson samples need 4k + 1 points");
  auto simpson = [&](std::size_t stride) {
    const std::size_t m = n / stride;
    std::vector<double> w(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
      const double c = (i == 0 || i == m) ? 1.0 : (i & 1 ? 4.0 : 2.0);
      w[i] = c * y[i * stride];
    }
    return pairwise_sum(w) * h * double(stride) / 3.0;
  };
  QuadratureResult r;
  r.points = static_cast<int>(y.size());
  r.spacing = h;
  r.value = simpson(1);
  r.error_estimate = std::abs(r.value - simpson(2)) / 15.0;
  return r;
}

QuadratureResult integrate_1d(const std::function<double(double)>& f, double a, double b, int n,
                              double tol) {
  if (!(a < b)) throw InvalidArgument("integrate_1d: need a < b");
  if (n < 3) throw InvalidArgument("integrate_1d: need n >= 3");
  n = (n + 3) / 4 * 4;
  const double h = (b - a) / n;
  std::vector<double> y(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) y[i] = f(i == n ? b : a + i * h);
  const auto r = integrate_samples_1d(y, h);
  if (r.error_estimate > tol)
    throw UnderResolvedGrid("1-D quadrature error estimate " + std::to_string(r.error_estimate) +
                            " exceeds tolerance " + std::to_string(tol));
  return r;
}

}  // namespace kerrcat
