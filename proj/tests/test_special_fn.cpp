#include <boost/math/special_functions/bessel.hpp>
#include <catch_amalgamated.hpp>
#include <cmath>

#include "kerrcat/errors.hpp"
#include "kerrcat/special_fn.hpp"
#include "oracles.hpp"

using namespace kerrcat;
using Catch::Approx;

TEST_CASE("hermite matches the explicit coefficient sum", "[special_fn]") {
  for (int draw = 0; draw < 25; ++draw) {
    const cplx x(oracle::uniform(-3, 3), oracle::uniform(-3, 3));
    const int n = static_cast<int>(oracle::uniform(0, 30));
    const cplx ref = oracle::hermite_explicit(n, x);
    const cplx got = hermite(n, x);
    REQUIRE(std::abs(got - ref) <= 1e-11 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("hermite low orders", "[special_fn]") {
  const cplx x(0.3, -1.2);
  CHECK(std::abs(hermite(0, x) - 1.0) == 0.0);
  CHECK(std::abs(hermite(1, x) - 2.0 * x) < 1e-15);
  CHECK(std::abs(hermite(2, x) - (4.0 * x * x - 2.0)) < 1e-14);
  CHECK(std::abs(hermite(3, x) - (8.0 * x * x * x - 12.0 * x)) < 1e-13);
}

TEST_CASE("hermite_seq rescales instead of overflowing", "[special_fn]") {
  const cplx x(40.0, 25.0);
  const auto seq = hermite_seq(x, 400);
  REQUIRE(seq.log_scale > 0.0);
  for (const auto& v : seq.values) REQUIRE(std::isfinite(std::abs(v)));
  // log|H_n| agrees with the normalized sequence at high order
  const auto h = hermite_normalized(x, 400);
  const double via_seq = std::log(std::abs(seq.values[400])) + seq.log_scale;
  const double via_norm = std::log(std::abs(h.mantissa[400])) + h.log_mag[400] +
                          0.5 * (400 * std::log(2.0) + log_factorial(400));
  CHECK(via_seq == Approx(via_norm).epsilon(1e-12));
}

TEST_CASE("hermite rejects non-finite input", "[special_fn]") {
  CHECK_THROWS_AS(hermite_seq(cplx(NAN, 0.0), 4), InvalidArgument);
  CHECK_THROWS_AS(hermite_normalized(cplx(0.0, INFINITY), 4), InvalidArgument);
}

TEST_CASE("normalized hermite equals H_n / sqrt(2^n n!)", "[special_fn]") {
  for (int draw = 0; draw < 20; ++draw) {
    const cplx x(oracle::uniform(-2, 2), oracle::uniform(-2, 2));
    const auto h = hermite_normalized(x, 25);
    for (int n = 0; n <= 25; ++n) {
      const cplx ref = oracle::hermite_explicit(n, x) / std::sqrt(std::pow(2.0, n) * std::tgamma(n + 1.0));
      REQUIRE(std::abs(h.value(n) - ref) <= 1e-11 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("terminating 2F0 matches exact rational summation", "[special_fn]") {
  for (int draw = 0; draw < 25; ++draw) {
    const int n = static_cast<int>(oracle::uniform(0, 25));
    const int m = static_cast<int>(oracle::uniform(0, 25));
    const double tau = oracle::uniform(-2.0, 2.0);
    const double ref = oracle::hyp2f0_rational(n, m, tau);
    REQUIRE(hyp2f0_poly(n, m, tau) == Approx(ref).epsilon(1e-11).margin(1e-11));
  }
  CHECK(hyp2f0_poly(0, 7, 3.0) == 1.0);
  CHECK(hyp2f0_poly(1, 1, 0.5) == Approx(1.5));
}

TEST_CASE("modified Bessel I_n agrees with boost", "[special_fn]") {
  for (int draw = 0; draw < 25; ++draw) {
    const int n = static_cast<int>(oracle::uniform(0, 12));
    const double x = oracle::uniform(0.0, 30.0);
    REQUIRE(bessel_i(n, x) == Approx(boost::math::cyl_bessel_i(n, x)).epsilon(1e-12));
  }
  CHECK(bessel_i(0, 0.0) == 1.0);
  CHECK(bessel_i(3, 0.0) == 0.0);
  CHECK_THROWS_AS(bessel_i(1, -1.0), InvalidArgument);
}

TEST_CASE("reduced Bessel series reproduces I_nu", "[special_fn]") {
  for (int nu : {0, 1, 4}) {
    const double z = 3.7;
    const cplx red = bessel_i_reduced(nu, z * z / 4.0);
    CHECK(std::pow(z / 2.0, nu) * red.real() == Approx(boost::math::cyl_bessel_i(nu, z)).epsilon(1e-13));
  }
}

TEST_CASE("log_factorial and binomial", "[special_fn]") {
  CHECK(log_factorial(0) == 0.0);
  CHECK(log_factorial(10) == Approx(std::log(3628800.0)).epsilon(1e-15));
  CHECK(binomial(10, 3) == 120.0);
  CHECK(binomial(52, 5) == 2598960.0);
  CHECK(binomial(5, 7) == 0.0);
}

namespace {

IdentityInputs draw_inputs(Identity id) {
  IdentityInputs in;
  in.k = static_cast<int>(oracle::uniform(0, 4));
  in.l = static_cast<int>(oracle::uniform(0, 4));
  in.n = static_cast<int>(oracle::uniform(0, 6));
  in.m = static_cast<int>(oracle::uniform(0, 6));
  in.x = cplx(oracle::uniform(-1.2, 1.2), oracle::uniform(-1.2, 1.2));
  in.y = cplx(oracle::uniform(-1.2, 1.2), oracle::uniform(-1.2, 1.2));
  switch (id) {
    case Identity::charlier_bilinear: in.t = oracle::uniform(0.1, 3.0); break;
    case Identity::shifted_generating:
    case Identity::factorial_shift:
    case Identity::mehler_bessel: in.t = oracle::uniform(-1.5, 1.5); break;
    default: in.t = oracle::uniform(-0.8, 0.8); break;
  }
  return in;
}

}  // namespace

TEST_CASE("generating-function identities hold over random draws", "[special_fn]") {
  for (Identity id : kAllIdentities) {
    DYNAMIC_SECTION(identity_name(id)) {
      for (int draw = 0; draw < 20; ++draw) {
        const auto in = draw_inputs(id);
        INFO("k=" << in.k << " l=" << in.l << " n=" << in.n << " m=" << in.m << " t=" << in.t << " x=" << in.x
                  << " y=" << in.y);
        REQUIRE(check_identity(id, in) < 1e-9);
      }
    }
  }
}

TEST_CASE("Mehler sums survive heavy cancellation near |t| = 1", "[special_fn]") {
  // x ~ -y with t near 0.9 leaves a right side near 1e-30 from terms of order 1e8.
  IdentityInputs in;
  in.k = 3;
  in.t = 0.8836;
  in.x = 2.7267;
  in.y = -2.2033;
  for (Identity id : {Identity::bilinear_photon_added, Identity::weighted_mehler, Identity::offset_mehler,
                      Identity::shifted_mehler})
    CHECK(check_identity(id, in) < 1e-10);
}

TEST_CASE("Bessel resummation is regular at x = 0", "[special_fn]") {
  IdentityInputs in;
  in.t = 0.4;
  in.x = 0.0;
  in.y = cplx(0.7, -0.2);
  CHECK(check_identity(Identity::mehler_bessel, in) < 1e-12);
  in.y = 0.0;
  CHECK(check_identity(Identity::mehler_bessel, in) < 1e-12);
}

TEST_CASE("Mehler-type identities refuse |t| >= 1", "[special_fn]") {
  IdentityInputs in;
  in.t = 1.0;
  in.x = 0.3;
  in.y = 0.2;
  CHECK_THROWS_AS(check_identity(Identity::bilinear_photon_added, in), DivergentSeries);
  CHECK_THROWS_AS(check_identity(Identity::weighted_mehler, in), DivergentSeries);
  in.t = -1.3;
  CHECK_THROWS_AS(check_identity(Identity::offset_mehler, in), DivergentSeries);
  CHECK_THROWS_AS(check_identity(Identity::shifted_mehler, in), DivergentSeries);
}
