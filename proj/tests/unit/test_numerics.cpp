#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include <boost/math/special_functions/beta.hpp>

#include "confirm/error.hpp"
#include "confirm/numerics.hpp"
#include "oracles.hpp"

using Catch::Approx;
using namespace confirm;
using namespace confirm::numerics;

TEST_CASE("Probability rejects values outside [0, 1]", "[numerics][probability]") {
  CHECK_NOTHROW(Probability(0.0));
  CHECK_NOTHROW(Probability(1.0));
  CHECK_THROWS_AS(Probability(-1e-12), DomainError);
  CHECK_THROWS_AS(Probability(1.0 + 1e-12), DomainError);
  CHECK_THROWS_AS(Probability(std::nan("")), DomainError);
}

TEST_CASE("normal quantile: critical values", "[numerics][normal]") {
  CHECK(std_normal_quantile(0.975) == Approx(1.959963984540054).margin(1e-14));
  CHECK(std_normal_quantile(0.8) == Approx(0.841621233572914).margin(1e-14));
  CHECK(std_normal_quantile(0.95) == Approx(1.644853626951472).margin(1e-14));
  CHECK(std_normal_quantile(0.5) == 0.0);
  CHECK(std_normal_quantile(std::sqrt(0.95)) == Approx(1.954508327213992).margin(1e-13));
}

TEST_CASE("normal quantile matches Boost across the unit interval", "[numerics][normal]") {
  for (double p : {1e-300, 1e-100, 1e-20, 1e-10, 1e-5, 0.001, 0.0125, 0.02425, 0.1, 0.3, 0.49, 0.51, 0.7, 0.9,
                   0.97575, 0.999, 1 - 1e-10}) {
    INFO("p = " << p);
    const double want = oracle::z(p);
    CHECK(std_normal_quantile(p) == Approx(want).epsilon(1e-13).margin(1e-14));
  }
}

TEST_CASE("normal quantile and CDF are mutual inverses", "[numerics][normal]") {
  // Upper-tail p = Phi(x) keeps only the ulps of 1 - p, so the round trip is
  // taken on the lower tail and mirrored.
  for (double x = -8.0; x <= 8.0; x += 0.37) {
    INFO("x = " << x);
    const double back = x <= 0.0 ? std_normal_quantile(normal_cdf(x)) : -std_normal_quantile(normal_cdf(-x));
    CHECK(back == Approx(x).epsilon(1e-12).margin(1e-12));
  }
  CHECK(normal_cdf(1.3) + normal_cdf(-1.3) == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("normal quantile rejects the closed endpoints", "[numerics][normal]") {
  CHECK_THROWS_AS(std_normal_quantile(0.0), DomainError);
  CHECK_THROWS_AS(std_normal_quantile(1.0), DomainError);
}

TEST_CASE("normal CDF matches a 50-digit evaluation", "[numerics][normal]") {
  for (double x : {-37.5, -37.0, -26.3, -10.0, -5.5, -1.0, -1e-3, 0.0, 0.25, 1.959963984540054, 4.0, 8.0}) {
    INFO("x = " << x);
    CHECK(normal_cdf(x) == Approx(oracle::phi_cdf_exact(x)).epsilon(2e-15).margin(1e-300));
  }
  CHECK(normal_pdf(0.0) == Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-15));
}

TEST_CASE("regularized incomplete beta matches Boost", "[numerics][beta]") {
  for (double a : {0.5, 1.0, 2.5, 30.0, 979.5}) {
    for (double b : {0.5, 1.0, 7.0, 500.0}) {
      for (double x : {0.0, 1e-6, 0.1, 0.5, 0.77, 0.999, 1.0}) {
        INFO("a = " << a << " b = " << b << " x = " << x);
        CHECK(regularized_incomplete_beta(a, b, x) == Approx(boost::math::ibeta(a, b, x)).epsilon(1e-11).margin(1e-15));
      }
    }
  }
  CHECK_THROWS_AS(regularized_incomplete_beta(0.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(regularized_incomplete_beta(1.0, 1.0, 1.5), DomainError);
}

TEST_CASE("Student t CDF and quantile match Boost", "[numerics][student_t]") {
  for (int df : {1, 2, 3, 5, 18, 30, 120, 1959}) {
    for (double p : {0.001, 0.025, 0.05, 0.3, 0.5, 0.8, 0.95, 0.975, 0.999}) {
      INFO("df = " << df << " p = " << p);
      const double want = oracle::t_quantile(p, df);
      CHECK(student_t_quantile(p, df) == Approx(want).epsilon(1e-11).margin(1e-13));
    }
    for (double x : {-40.0, -3.0, -0.5, 0.0, 0.7, 2.0, 12.0}) {
      INFO("df = " << df << " x = " << x);
      CHECK(student_t_cdf(x, df) == Approx(oracle::t_cdf(x, df)).epsilon(1e-12).margin(1e-15));
    }
  }
}

TEST_CASE("Student t quantile: reference values", "[numerics][student_t]") {
  CHECK(student_t_quantile(0.95, 1959) == Approx(1.6456318272409127).margin(1e-12));
  CHECK(student_t_quantile(0.975, 1) == Approx(12.706204736432095).margin(1e-10));
  CHECK(student_t_quantile(0.975, 2) == Approx(4.302652729749464).margin(1e-12));
  CHECK(student_t_quantile(0.5, 7) == 0.0);
  CHECK_THROWS_AS(student_t_quantile(0.5, 0), DomainError);
}

TEST_CASE("bivariate normal CDF: closed forms", "[numerics][bvn]") {
  CHECK(bvn_cdf(0.0, 0.0, 0.5) == Approx(1.0 / 3.0).epsilon(1e-15));
  for (double rho : {-0.9, -0.3, 0.0, 0.2, 0.7, 0.99}) {
    INFO("rho = " << rho);
    CHECK(bvn_cdf(0.0, 0.0, rho) == Approx(0.25 + std::asin(rho) / (2.0 * M_PI)).epsilon(1e-14));
  }
  CHECK(bvn_cdf(0.4, -1.1, 0.0) == Approx(normal_cdf(0.4) * normal_cdf(-1.1)).epsilon(1e-14));
  CHECK(bvn_cdf(0.4, -1.1, 1.0) == Approx(normal_cdf(-1.1)).epsilon(1e-14));
  CHECK(bvn_cdf(0.4, -1.1, -1.0) == Approx(std::max(0.0, normal_cdf(0.4) + normal_cdf(-1.1) - 1.0)).margin(1e-15));
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(bvn_cdf(inf, 0.3, 0.5) == Approx(normal_cdf(0.3)).epsilon(1e-15));
  CHECK(bvn_cdf(-inf, 0.3, 0.5) == 0.0);
  CHECK_THROWS_AS(bvn_cdf(0.0, 0.0, 1.5), DomainError);
}

TEST_CASE("bivariate normal CDF matches quadrature", "[numerics][bvn]") {
  for (double rho : {-0.95, -0.5, 0.1, 0.5, 0.8, 0.95}) {
    for (double h : {-3.0, -0.7, 0.0, 1.2, 2.5}) {
      for (double k : {-2.0, 0.4, 1.9}) {
        INFO("h = " << h << " k = " << k << " rho = " << rho);
        CHECK(bvn_cdf(h, k, rho) == Approx(oracle::bvn(h, k, rho)).margin(1e-14));
      }
    }
  }
}

TEST_CASE("solve_root finds bracketed roots", "[numerics][root]") {
  const double r = solve_root([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14);
  CHECK(r == Approx(std::sqrt(2.0)).margin(1e-14));

  const double c = solve_root([](double x) { return std::cos(x) - x; }, 0.0, 1.0, 1e-15);
  CHECK(c == Approx(0.7390851332151607).margin(1e-15));

  SECTION("a zero at an endpoint is returned directly") {
    CHECK(solve_root([](double x) { return x - 1.0; }, 1.0, 3.0, 1e-12) == 1.0);
    CHECK(solve_root([](double x) { return x - 3.0; }, 1.0, 3.0, 1e-12) == 3.0);
  }
  SECTION("no sign change is a BracketError") {
    CHECK_THROWS_AS(solve_root([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12), BracketError);
  }
  SECTION("tolerance must be positive") {
    CHECK_THROWS_AS(solve_root([](double x) { return x; }, -1.0, 1.0, 0.0), DomainError);
  }
  SECTION("a flat-then-steep function still converges") {
    const double s = solve_root([](double x) { return std::pow(x, 15) - 0.5; }, 0.0, 1.5, 1e-13);
    CHECK(s == Approx(std::pow(0.5, 1.0 / 15.0)).margin(1e-12));
  }
}
