#include <catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "kerrcat/errors.hpp"
#include "kerrcat/quad_engine.hpp"

using namespace kerrcat;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

double gaussian(cplx b) { return 2.0 / kPi * std::exp(-2.0 * std::norm(b)); }

double fock1_wigner(cplx b) {
  const double s = std::norm(b);
  return 2.0 / kPi * (4.0 * s - 1.0) * std::exp(-2.0 * s);
}

}  // namespace

TEST_CASE("grid geometry", "[quad_engine]") {
  PhaseSpaceGrid g{cplx(1.0, -2.0), 3.0, 6};
  CHECK(g.spacing() == 1.0);
  CHECK(g.cell_area() == 1.0);
  CHECK(g.point(0, 0) == cplx(1.0 - 2.5, -2.0 - 2.5));
  CHECK(g.size() == 36u);
  CHECK_THROWS_AS((PhaseSpaceGrid{0.0, -1.0, 10}.validate()), InvalidArgument);
  CHECK_THROWS_AS((PhaseSpaceGrid{0.0, 1.0, 0}.validate()), InvalidArgument);
}

TEST_CASE("2-D midpoint rule on closed-form integrands", "[quad_engine]") {
  const PhaseSpaceGrid g{0.0, 6.0, 401};
  CHECK(integrate_2d(gaussian, g).value == Approx(1.0).epsilon(1e-8));
  CHECK(integrate_2d([](cplx) { return 0.0; }, g).value == 0.0);
  const double ref = 4.0 * std::exp(-0.5) - 1.0;
  // |W| has a kink on the zero circle, so the midpoint rule is only second order here.
  CHECK(integrate_2d([](cplx b) { return std::abs(fock1_wigner(b)); }, g).value == Approx(ref).margin(1e-4));
}

TEST_CASE("1-D Simpson rule", "[quad_engine]") {
  const auto g = integrate_1d([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 801);
  CHECK(std::abs(g.value - std::sqrt(kPi)) < 1e-10);
  const auto s = integrate_1d([](double x) { return std::sin(x); }, 0.0, 2.0 * kPi, 400);
  CHECK(std::abs(s.value) < 1e-12);
  CHECK_THROWS_AS(integrate_1d([](double x) { return x; }, 1.0, 0.0, 8), InvalidArgument);
}

TEST_CASE("quadrature tolerance is enforced", "[quad_engine]") {
  const PhaseSpaceGrid coarse{0.0, 1.0, 8};
  CHECK_THROWS_AS(integrate_2d([](cplx b) { return std::exp(b.real()); }, coarse, 1e-10), UnderResolvedGrid);
  CHECK_THROWS_AS(integrate_1d([](double x) { return std::exp(10.0 * x); }, 0.0, 1.0, 8, 1e-12), UnderResolvedGrid);
}

TEST_CASE("halving the cell size shrinks the error estimate", "[quad_engine]") {
  // Integrands decay at the grid edge, as every phase-space field does.
  auto f = [](cplx b) { return std::exp(-std::norm(b)) * (1.0 + b.real() * b.real()); };
  double prev = INFINITY;
  // Odd point counts keep the coarse sub-lattice centred on the grid.
  for (auto [n, h] : {std::pair{7, 2.0}, std::pair{15, 1.0}, std::pair{31, 0.5}}) {
    const auto r = integrate_2d(f, PhaseSpaceGrid{0.0, h * n / 2.0, n});
    CHECK(r.error_estimate >= 0.0);
    CHECK(r.error_estimate * 3.0 <= prev);
    prev = r.error_estimate;
  }
  prev = INFINITY;
  for (int n : {8, 16, 32, 64}) {
    const auto r = integrate_1d([](double x) { return std::exp(x) * std::cos(3.0 * x); }, 0.0, 2.0, n);
    CHECK(r.error_estimate * 3.0 <= prev);
    prev = r.error_estimate;
  }
}

TEST_CASE("results are bit identical across thread counts", "[quad_engine]") {
  const PhaseSpaceGrid g{cplx(0.3, -0.1), 5.0, 257};
  auto f = [](cplx b) { return std::abs(fock1_wigner(b)) * std::cos(b.real()); };
  const auto one = integrate_2d(f, g, INFINITY, 1);
  for (int threads : {2, 3, 7}) {
    const auto many = integrate_2d(f, g, INFINITY, threads);
    CHECK(many.value == one.value);
    CHECK(many.error_estimate == one.error_estimate);
  }
  const auto s1 = sample_grid(f, g, 1);
  const auto s4 = sample_grid(f, g, 4);
  CHECK(s1 == s4);
}

TEST_CASE("pairwise sum and parallel_for", "[quad_engine]") {
  std::vector<double> v(1000003);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / double(i + 1);
  double ref = 0.0;
  for (std::size_t i = v.size(); i-- > 0;) ref += v[i];
  CHECK(pairwise_sum(v) == Approx(ref).epsilon(1e-14));
  CHECK(pairwise_sum(nullptr, 0) == 0.0);

  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) ++hits[i];
  }, 5);
  for (int h : hits) REQUIRE(h == 1);
}
