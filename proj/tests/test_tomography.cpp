#include <catch_amalgamated.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "kerrcat/fock_state.hpp"
#include "kerrcat/tomography.hpp"
#include "oracles.hpp"

using namespace kerrcat;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

using ClosedForm = double (*)(const ModelParams&, double, double);

struct Timepoint {
  const char* name;
  ClosedForm closed;
  double lambda_t;
};

const Timepoint kTimes[] = {
    {"t0", tomogram_t0, 0.0},
    {"quarter", tomogram_quarter, kPi / 4},
    {"eighth", tomogram_eighth, kPi / 8},
};

FockState evolved(const ModelParams& p, double lambda_t) {
  // Twice the working cutoff so the series reference is pointwise converged.
  const int n = 2 * build_state(p).n_max() + 20;
  return evolve_lambda_t(build_state_to(p, n), p, lambda_t);
}

}  // namespace

TEST_CASE("closed-form tomograms on the reference lattice", "[tomography]") {
  ModelParams p;  // alpha = 2, r = 0.5, c = 1, kappa = 1, delta = 1
  const auto xs = default_x_grid(p, 20);
  const auto phis = uniform_phi_grid(20);
  for (const auto& tp : kTimes) {
    DYNAMIC_SECTION(tp.name) {
      const auto s = evolved(p, tp.lambda_t);
      double peak = 0.0;
      for (double x : xs) peak = std::max(peak, tomogram_series(s, x, 0.0));
      for (double x : xs)
        for (double phi : phis) {
          const double ref = tomogram_series(s, x, phi);
          REQUIRE(std::abs(tp.closed(p, x, phi) - ref) <= 1e-8 * std::max(ref, 1e-6 * peak));
        }
    }
  }
}

TEST_CASE("closed-form tomograms over random parameters", "[tomography]") {
  for (const auto& tp : kTimes) {
    DYNAMIC_SECTION(tp.name) {
      for (int draw = 0; draw < 20; ++draw) {
        ModelParams p;
        p.alpha = std::polar(oracle::uniform(0.0, 2.5), oracle::uniform(-kPi, kPi));
        p.r = oracle::uniform(0.0, 1.0);
        p.theta_sq = oracle::uniform(-kPi, kPi);
        p.kappa = static_cast<int>(oracle::uniform(0, 4));
        p.c = std::polar(oracle::uniform(0.2, 1.5), oracle::uniform(-kPi, kPi));
        p.omega = oracle::uniform(0.5, 3.0);
        const double x = oracle::uniform(-4.0, 4.0);
        const double phi = oracle::uniform(0.0, 2.0 * kPi);
        const double ref = tomogram_series(evolved(p, tp.lambda_t), x, phi);
        INFO(p.describe() << " x=" << x << " phi=" << phi);
        REQUIRE(std::abs(tp.closed(p, x, phi) - ref) <= 1e-8 * std::max(ref, 1e-4));
      }
    }
  }
}

TEST_CASE("tomogram of simple states", "[tomography]") {
  Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(4, 4);
  vac(0, 0) = 1.0;
  for (double x : {-1.3, 0.0, 0.4})
    CHECK(tomogram_series(DensityMatrix(vac), x, 0.7) == Approx(std::exp(-x * x) / std::sqrt(kPi)).epsilon(1e-14));

  ModelParams coh;
  coh.kappa = 0;
  coh.r = 0.0;
  coh.c = 0.0;
  coh.alpha = std::polar(1.7, 0.6);
  for (double phi : {0.0, 1.1, 2.9}) {
    const double x0 = std::sqrt(2.0) * 1.7 * std::cos(0.6 - phi);
    for (double x : {x0 - 0.5, x0, x0 + 1.0})
      CHECK(tomogram_t0(coh, x, phi) == Approx(std::exp(-(x - x0) * (x - x0)) / std::sqrt(kPi)).epsilon(1e-12));
  }
}

TEST_CASE("c = +-1 tomograms are even in X, and all are 2 pi periodic", "[tomography]") {
  for (int draw = 0; draw < 20; ++draw) {
    ModelParams p;
    p.alpha = std::polar(oracle::uniform(0.5, 2.5), oracle::uniform(-kPi, kPi));
    p.r = oracle::uniform(0.0, 1.0);
    p.theta_sq = oracle::uniform(-kPi, kPi);
    p.kappa = static_cast<int>(oracle::uniform(0, 4));
    p.c = draw % 2 ? 1.0 : -1.0;
    const double x = oracle::uniform(-4.0, 4.0);
    const double phi = oracle::uniform(0.0, 2.0 * kPi);
    for (const auto& tp : kTimes) {
      const double v = tp.closed(p, x, phi);
      REQUIRE(v >= 0.0);
      REQUIRE(tp.closed(p, -x, phi) == Approx(v).epsilon(1e-10).margin(1e-15));
      REQUIRE(tp.closed(p, x, phi + 2.0 * kPi) == Approx(v).epsilon(1e-10).margin(1e-15));
    }
  }
}

TEST_CASE("the c = 1, kappa = 1, delta = 1 tomogram has period pi/4", "[tomography]") {
  ModelParams p;
  for (double x : {-2.0, 0.3, 1.5})
    for (double phi : {0.0, kPi / 3, 2.0})
      CHECK(tomogram_quarter(p, x, phi) == Approx(tomogram_t0(p, x, phi)).epsilon(1e-12));
}

TEST_CASE("tomogram surfaces are normalized and nonnegative", "[tomography]") {
  ModelParams p;
  const auto s = build_state(p);
  for (double lt : {0.0, kPi / 12, kPi / 8}) {
    const auto e = evolve_lambda_t(s, p, lt);
    const auto rho = density(e);
    const auto t = tomogram_surface([&](double x, double phi) { return tomogram_series(rho, x, phi); },
                                    default_x_grid(p), uniform_phi_grid(16), 1);
    for (double v : t.values) REQUIRE(v >= 0.0);
    for (std::size_t k = 0; k < t.phi_grid.size(); ++k) REQUIRE(std::abs(tomogram_marginal(t, k).value - 1.0) < 1e-6);
    const auto t4 = tomogram_surface([&](double x, double phi) { return tomogram_series(rho, x, phi); },
                                     default_x_grid(p), uniform_phi_grid(16), 4);
    CHECK(t4.values == t.values);
  }
  const auto closed = tomogram_surface([&](double x, double phi) { return tomogram_eighth(p, x, phi); },
                                       default_x_grid(p), uniform_phi_grid(8));
  for (std::size_t k = 0; k < closed.phi_grid.size(); ++k)
    CHECK(std::abs(tomogram_marginal(closed, k).value - 1.0) < 1e-6);
}

TEST_CASE("tomogram CSV export", "[tomography]") {
  const auto path = std::filesystem::temp_directory_path() / "kerrcat_tomo.csv";
  ModelParams p;
  const auto t = tomogram_surface([&](double x, double phi) { return tomogram_t0(p, x, phi); }, default_x_grid(p, 5),
                                  uniform_phi_grid(2));
  write_tomogram_csv(path, t, {"lambda_t=0"});
  std::ifstream in(path);
  std::string l1, l2;
  std::getline(in, l1);
  std::getline(in, l2);
  CHECK(l1 == "# lambda_t=0");
  CHECK(l2 == "x, phi, omega");
  std::filesystem::remove(path);
}
